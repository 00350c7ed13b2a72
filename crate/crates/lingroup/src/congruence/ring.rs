//! The entry ring R of a generating set: localization data (1/mu)Delta.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, Polynomial};
use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub enum MuDatum {
    Int(BigInt),
    /// Polynomial over the base field P of a (possibly algebraic) function
    /// field; monic.
    Poly(Polynomial),
}

#[derive(Debug, Clone)]
pub struct RingInfo {
    pub mu: MuDatum,
    pub characteristic: u64,
}

impl RingInfo {
    pub fn mu_display(&self, field: &FieldDescriptor) -> String {
        match &self.mu {
            MuDatum::Int(v) => v.to_string(),
            MuDatum::Poly(p) => {
                let base = field.base().expect("polynomial mu over a function field");
                p.format(field.var().unwrap_or("x"), base)
            }
        }
    }
}

fn lcm_rational(acc: &mut BigInt, r: &BigRational) {
    *acc = acc.lcm(r.denom());
}

fn lcm_poly(acc: &mut Polynomial, den: &Polynomial, base: &FieldDescriptor) -> Result<()> {
    if acc.is_zero() {
        *acc = den.monic(base)?;
    } else {
        *acc = acc.lcm(den, base)?;
    }
    Ok(())
}

/// Computes the denominator datum mu with R = (1/mu)Delta containing every
/// entry of the matrices in S and their inverses. Fails on a singular
/// generator.
pub fn clear_denominators(gens: &[Matrix]) -> Result<RingInfo> {
    let field = gens
        .first()
        .map(|g| g.field().clone())
        .ok_or_else(|| Error::InvalidInput("empty generating set".into()))?;
    let mut all: Vec<Matrix> = Vec::with_capacity(2 * gens.len());
    for (i, g) in gens.iter().enumerate() {
        let inv = g.inverse().map_err(|_| Error::SingularGenerator(i))?;
        all.push(g.clone());
        all.push(inv);
    }
    let characteristic = field.characteristic();
    match &*field {
        FieldDescriptor::Rationals => {
            let mut mu = BigInt::one();
            for m in &all {
                for e in m.entries() {
                    if let FieldElement::Rat(r) = e {
                        lcm_rational(&mut mu, r);
                    }
                }
            }
            Ok(RingInfo {
                mu: MuDatum::Int(mu),
                characteristic,
            })
        }
        FieldDescriptor::NumberField { .. } => {
            let mut mu = BigInt::one();
            for m in &all {
                for e in m.entries() {
                    if let FieldElement::NumField(coords) = e {
                        for r in coords {
                            lcm_rational(&mut mu, r);
                        }
                    }
                }
            }
            Ok(RingInfo {
                mu: MuDatum::Int(mu),
                characteristic,
            })
        }
        FieldDescriptor::FiniteField { .. } => Ok(RingInfo {
            mu: MuDatum::Int(BigInt::one()),
            characteristic,
        }),
        FieldDescriptor::FunctionField { base, .. } => {
            let mut mu = Polynomial::one(base);
            for m in &all {
                for e in m.entries() {
                    if let FieldElement::RatFunc { den, .. } = e {
                        lcm_poly(&mut mu, den, base)?;
                    }
                }
            }
            Ok(RingInfo {
                mu: MuDatum::Poly(mu),
                characteristic,
            })
        }
        FieldDescriptor::AlgFunctionField { base, .. } => {
            let inner = base.base().expect("function field base");
            let mut mu = Polynomial::one(inner);
            for m in &all {
                for e in m.entries() {
                    if let FieldElement::AlgFunc(coords) = e {
                        for c in coords {
                            if let FieldElement::RatFunc { den, .. } = c {
                                lcm_poly(&mut mu, den, inner)?;
                            }
                        }
                    }
                }
            }
            Ok(RingInfo {
                mu: MuDatum::Poly(mu),
                characteristic,
            })
        }
    }
}
