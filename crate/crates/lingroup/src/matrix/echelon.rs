//! Reduced row echelon forms and an incremental span engine.
//!
//! The batch routine uses fraction-free cross-multiplication with content
//! reduction over the rationals and number fields, where entry blow-up is
//! the dominant cost, and ordinary Gauss-Jordan elimination elsewhere.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldDescriptor, FieldElement};

pub struct Rref {
    pub rows: Vec<Vec<FieldElement>>,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form with leading ones and strictly increasing
/// pivot columns.
pub fn rref(rows: Vec<Vec<FieldElement>>, width: usize, field: &Arc<FieldDescriptor>) -> Rref {
    let integral = matches!(
        &**field,
        FieldDescriptor::Rationals | FieldDescriptor::NumberField { .. }
    );
    let mut work: Vec<Vec<FieldElement>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|e| !field.is_zero(e)))
        .map(|r| if integral { to_primitive(r, field) } else { r })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0usize;
    for col in 0..width {
        let found = (next..work.len()).find(|&r| !field.is_zero(&work[r][col]));
        let Some(r) = found else { continue };
        work.swap(next, r);
        for other in 0..work.len() {
            if other == next || field.is_zero(&work[other][col]) {
                continue;
            }
            if integral {
                cross_eliminate(&mut work, other, next, col, field);
            } else {
                div_eliminate(&mut work, other, next, col, field);
            }
        }
        pivot_rows.push(next);
        pivots.push(col);
        next += 1;
    }
    work.truncate(next);
    for (row, &col) in work.iter_mut().zip(&pivots) {
        let inv = field.inv(&row[col]).expect("pivot entry is nonzero");
        for e in row.iter_mut() {
            *e = field.mul(e, &inv);
        }
    }
    Rref { rows: work, pivots }
}

/// target = lead(source) * target - target[col] * source, content-reduced.
fn cross_eliminate(
    work: &mut [Vec<FieldElement>],
    target: usize,
    source: usize,
    col: usize,
    field: &Arc<FieldDescriptor>,
) {
    let s_lead = work[source][col].clone();
    let t_lead = work[target][col].clone();
    let width = work[target].len();
    for j in 0..width {
        let a = field.mul(&work[target][j], &s_lead);
        let b = field.mul(&work[source][j], &t_lead);
        work[target][j] = field.sub(&a, &b);
    }
    let reduced = to_primitive(std::mem::take(&mut work[target]), field);
    work[target] = reduced;
}

fn div_eliminate(
    work: &mut [Vec<FieldElement>],
    target: usize,
    source: usize,
    col: usize,
    field: &Arc<FieldDescriptor>,
) {
    let factor = field
        .div(&work[target][col], &work[source][col])
        .expect("pivot entry is nonzero");
    let width = work[target].len();
    for j in 0..width {
        let sub = field.mul(&work[source][j], &factor);
        work[target][j] = field.sub(&work[target][j], &sub);
    }
}

/// Scales a row over Q or a number field so every rational coordinate is an
/// integer and the collected numerators have no common factor.
fn to_primitive(row: Vec<FieldElement>, _field: &Arc<FieldDescriptor>) -> Vec<FieldElement> {
    let mut den_lcm = BigInt::one();
    let collect = |r: &BigRational, den_lcm: &mut BigInt| {
        if !r.is_zero() {
            *den_lcm = den_lcm.lcm(r.denom());
        }
    };
    for e in &row {
        match e {
            FieldElement::Rat(r) => collect(r, &mut den_lcm),
            FieldElement::NumField(coords) => {
                for r in coords {
                    collect(r, &mut den_lcm);
                }
            }
            _ => return row,
        }
    }
    let mut content = BigInt::zero();
    let scale = BigRational::from(den_lcm);
    let scaled: Vec<FieldElement> = row
        .into_iter()
        .map(|e| match e {
            FieldElement::Rat(r) => {
                let v = r * &scale;
                content = content.gcd(v.numer());
                FieldElement::Rat(v)
            }
            FieldElement::NumField(coords) => FieldElement::NumField(
                coords
                    .into_iter()
                    .map(|r| {
                        let v = r * &scale;
                        content = content.gcd(v.numer());
                        v
                    })
                    .collect(),
            ),
            other => other,
        })
        .collect();
    if content.is_zero() || content.is_one() {
        return scaled;
    }
    if content.is_negative() {
        content = -content;
    }
    let down = BigRational::from(content).recip();
    scaled
        .into_iter()
        .map(|e| match e {
            FieldElement::Rat(r) => FieldElement::Rat(r * &down),
            FieldElement::NumField(coords) => {
                FieldElement::NumField(coords.into_iter().map(|r| r * &down).collect())
            }
            other => other,
        })
        .collect()
}

/// Incrementally maintained reduced row space with exact membership tests.
/// Optionally records, for every reduced row, its expression over the
/// pushed vectors, which lets callers recover linear relations.
pub struct IncrementalSpan {
    field: Arc<FieldDescriptor>,
    width: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<FieldElement>>,
    pushed: usize,
    track: bool,
}

pub enum PushOutcome {
    /// Vector enlarged the span.
    Added,
    /// Vector was already in the span; with combination tracking on, the
    /// coefficients express it over the previously pushed vectors in push
    /// order (vectors that were themselves in span get coefficient zero).
    InSpan(Option<Vec<FieldElement>>),
}

impl IncrementalSpan {
    pub fn new(width: usize, field: Arc<FieldDescriptor>, track: bool) -> Self {
        IncrementalSpan {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            pushed: 0,
            track,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pushed(&self) -> usize {
        self.pushed
    }

    fn reduce(&self, mut v: Vec<FieldElement>) -> (Vec<FieldElement>, Vec<FieldElement>) {
        let f = &self.field;
        let mut combo = if self.track {
            vec![f.zero(); self.pushed]
        } else {
            Vec::new()
        };
        for idx in 0..self.rows.len() {
            let p = self.pivots[idx];
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            let row = &self.rows[idx];
            for j in 0..self.width {
                let sub = f.mul(&row[j], &c);
                v[j] = f.sub(&v[j], &sub);
            }
            if self.track {
                for (cj, rj) in combo.iter_mut().zip(&self.combos[idx]) {
                    let add = f.mul(rj, &c);
                    *cj = f.add(cj, &add);
                }
            }
        }
        (v, combo)
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let (res, _) = self.reduce(v.to_vec());
        res.iter().all(|e| self.field.is_zero(e))
    }

    pub fn push(&mut self, v: Vec<FieldElement>) -> PushOutcome {
        debug_assert_eq!(v.len(), self.width);
        let f = self.field.clone();
        let (mut res, combo) = self.reduce(v);
        let lead = res.iter().position(|e| !f.is_zero(e));
        let Some(p) = lead else {
            if self.track {
                for c in self.combos.iter_mut() {
                    c.push(f.zero());
                }
            }
            self.pushed += 1;
            return PushOutcome::InSpan(if self.track { Some(combo) } else { None });
        };
        // normalize the new row, then clear its pivot column everywhere
        let inv = f.inv(&res[p]).expect("nonzero lead");
        for e in res.iter_mut() {
            *e = f.mul(e, &inv);
        }
        let mut new_combo = Vec::new();
        if self.track {
            // res = (v - sum combo_j . pushed_j) / lead
            new_combo = combo
                .iter()
                .map(|c| f.neg(&f.mul(c, &inv)))
                .collect::<Vec<_>>();
            new_combo.push(inv.clone());
            for c in self.combos.iter_mut() {
                c.push(f.zero());
            }
        }
        for idx in 0..self.rows.len() {
            if f.is_zero(&self.rows[idx][p]) {
                continue;
            }
            let c = self.rows[idx][p].clone();
            for j in 0..self.width {
                let sub = f.mul(&res[j], &c);
                self.rows[idx][j] = f.sub(&self.rows[idx][j], &sub);
            }
            if self.track {
                for (cj, nj) in self.combos[idx].iter_mut().zip(&new_combo) {
                    let sub = f.mul(nj, &c);
                    *cj = f.sub(cj, &sub);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, res);
        if self.track {
            self.combos.insert(pos, new_combo);
        }
        self.pushed += 1;
        PushOutcome::Added
    }
}
