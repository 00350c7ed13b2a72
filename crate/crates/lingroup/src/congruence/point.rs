//! Selection of substitution points for function-field sources.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{finite, FieldDescriptor, FieldElement, Polynomial};

/// A substitution point alpha with mu(alpha) != 0. Over an infinite base
/// field the point is found among the integers 0, 1, -1, 2, -2, ...; over a
/// finite base field the search walks GF(p^d), then GF(p^2d), and so on,
/// since a non-root may only exist in an extension.
#[derive(Debug, Clone)]
pub struct SelectedPoint {
    /// Field containing alpha: the base field P itself, or a finite
    /// extension of a finite P.
    pub field: Arc<FieldDescriptor>,
    pub alpha: FieldElement,
    /// Image of P's generator inside `field` when `field` is a proper
    /// extension; None when `field` is P.
    pub base_gen_image: Option<FieldElement>,
}

impl SelectedPoint {
    /// Maps a coefficient from P into the point field.
    pub fn lift(&self, c: &FieldElement) -> FieldElement {
        match (&self.base_gen_image, c) {
            (None, _) => c.clone(),
            (Some(root), FieldElement::Fin(coords)) => {
                finite::embed_coords(coords, root, &self.field)
            }
            _ => panic!("extension points only arise over finite base fields"),
        }
    }

    /// Evaluates a polynomial with coefficients in P at alpha.
    pub fn eval(&self, poly: &Polynomial) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for c in poly.coeffs().iter().rev() {
            acc = f.mul(&acc, &self.alpha);
            acc = f.add(&acc, &self.lift(c));
        }
        acc
    }
}

const EXTENSION_SEARCH_LIMIT: u64 = 10_000_000;

pub fn select_point(
    mu: &Polynomial,
    base: &Arc<FieldDescriptor>,
    seed: u64,
) -> Result<SelectedPoint> {
    if mu.is_zero() {
        return Err(Error::InvalidInput("mu must be non-zero".into()));
    }
    match &**base {
        FieldDescriptor::Rationals | FieldDescriptor::NumberField { .. } => {
            // 0, 1, -1, 2, -2, ...
            for k in 0.. {
                for cand in [k, -k] {
                    let alpha = base.from_i64(cand);
                    if !base.is_zero(&mu.eval(&alpha, base)) {
                        return Ok(SelectedPoint {
                            field: base.clone(),
                            alpha,
                            base_gen_image: None,
                        });
                    }
                    if k == 0 {
                        break;
                    }
                }
            }
            unreachable!("a polynomial has finitely many roots")
        }
        FieldDescriptor::FiniteField { p, min_poly } => {
            let d = min_poly.len() - 1;
            for j in 1.. {
                let (field, gen_image) = if j == 1 {
                    (base.clone(), None)
                } else {
                    let ext = FieldDescriptor::finite_field(*p, d * j)?;
                    let root = finite::embedding_root(min_poly, &ext, seed)?;
                    (ext, Some(root))
                };
                let count = finite::element_count_u64(&field).unwrap_or(u64::MAX);
                if count > EXTENSION_SEARCH_LIMIT {
                    return Err(Error::Unsupported(format!(
                        "substitution point search exceeded GF({}^{})",
                        p,
                        d * j
                    )));
                }
                let point = SelectedPoint {
                    field: field.clone(),
                    alpha: field.zero(),
                    base_gen_image: gen_image,
                };
                for idx in 0..count {
                    let alpha = finite::element_from_index(idx, &field);
                    let probe = SelectedPoint {
                        alpha: alpha.clone(),
                        ..point.clone()
                    };
                    if !field.is_zero(&probe.eval(mu)) {
                        return Ok(probe);
                    }
                }
            }
            unreachable!("extensions grow past the root count of mu")
        }
        _ => Err(Error::InvalidInput(
            "substitution points require a rational, number field, or finite base".into(),
        )),
    }
}
