//! Minimal polynomials and the unipotence and diagonalizability tests
//! built on them.

use super::echelon::{IncrementalSpan, PushOutcome};
use super::Matrix;
use crate::field::{FieldElement, Polynomial};

/// Minimal polynomial by Krylov iteration: for each standard basis vector,
/// find the first linear dependence among v, v g, v g^2, ...; the answer is
/// the least common multiple of the local annihilators.
pub fn minimal_polynomial(g: &Matrix) -> Polynomial {
    let f = g.field().clone();
    let n = g.n();
    let mut result = Polynomial::one(&f);
    for i in 0..n {
        let mut span = IncrementalSpan::new(n, f.clone(), true);
        let mut v: Vec<FieldElement> = (0..n)
            .map(|j| if i == j { f.one() } else { f.zero() })
            .collect();
        let local = loop {
            match span.push(v.clone()) {
                PushOutcome::Added => {}
                PushOutcome::InSpan(Some(coeffs)) => {
                    // v g^m = sum coeffs[j] v g^j, so the local annihilator is
                    // t^m - sum coeffs[j] t^j
                    let m = coeffs.len();
                    let mut poly = vec![f.zero(); m + 1];
                    for (j, c) in coeffs.into_iter().enumerate() {
                        poly[j] = f.neg(&c);
                    }
                    poly[m] = f.one();
                    break Polynomial::new(poly, &f);
                }
                PushOutcome::InSpan(None) => unreachable!("tracking enabled"),
            }
            v = row_times(&v, g);
        };
        result = result.lcm(&local, &f).expect("monic lcm");
        if result.degree() == Some(n) {
            break;
        }
    }
    result
}

fn row_times(v: &[FieldElement], m: &Matrix) -> Vec<FieldElement> {
    let f = m.field();
    let n = m.n();
    let mut out = vec![f.zero(); n];
    for (i, c) in v.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let prod = f.mul(c, m.entry(i, j));
            *o = f.add(o, &prod);
        }
    }
    out
}

/// True iff (g - 1)^n = 0, i.e. every eigenvalue is 1.
pub fn is_unipotent(g: &Matrix) -> bool {
    let f = g.field();
    let u = g.sub_scalar(&f.one());
    nilpotency_index(&u).is_some()
}

/// Smallest k <= n with m^k = 0, if m is nilpotent.
pub fn nilpotency_index(m: &Matrix) -> Option<usize> {
    let n = m.n();
    let mut acc = m.clone();
    if acc.is_zero() {
        return Some(1);
    }
    for k in 2..=n {
        acc = acc.mul(m).expect("same field");
        if acc.is_zero() {
            return Some(k);
        }
    }
    None
}

/// True iff the minimal polynomial is separable (gcd with its derivative is
/// 1), i.e. g is diagonalizable over the algebraic closure.
pub fn is_diagonalizable(g: &Matrix) -> bool {
    let f = g.field();
    let m = minimal_polynomial(g);
    let d = m.derivative(f);
    if d.is_zero() {
        return false;
    }
    let gcd = m.gcd(&d, f).expect("gcd over a field");
    gcd.is_one(f)
}
