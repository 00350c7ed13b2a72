//! Helpers for monic integer polynomials: discriminants, rational root
//! search, and cyclotomic recognition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FieldDescriptor, FieldElement, Polynomial};
use crate::error::{Error, Result};

fn to_rational_poly(f: &[BigInt]) -> Polynomial {
    let q = FieldDescriptor::Rationals;
    Polynomial::new(
        f.iter()
            .map(|c| FieldElement::Rat(BigRational::from(c.clone())))
            .collect(),
        &q,
    )
}

/// Discriminant of a monic integer polynomial:
/// (-1)^(k(k-1)/2) * Res(f, f').
pub fn discriminant(f: &[BigInt]) -> Result<BigInt> {
    let mut coeffs = f.to_vec();
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidInput("discriminant requires degree >= 1".into()));
    }
    if !coeffs.last().unwrap().is_one() {
        return Err(Error::NotMonic);
    }
    let k = coeffs.len() - 1;
    if k == 1 {
        return Ok(BigInt::one());
    }
    let q = FieldDescriptor::Rationals;
    let fp = to_rational_poly(&coeffs);
    let dp = fp.derivative(&q);
    let res = fp.resultant(&dp, &q)?;
    let res = match res {
        FieldElement::Rat(r) => r,
        _ => unreachable!(),
    };
    assert!(res.is_integer(), "resultant of integer polynomials is integral");
    let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(res.to_integer() * BigInt::from(sign))
}

/// An integer root of a monic integer polynomial, if one exists among the
/// divisors of the constant term discoverable by trial division up to 10^6.
/// Monic polynomials have no non-integer rational roots.
pub fn rational_root(f: &[BigInt]) -> Option<BigInt> {
    let a0 = &f[0];
    if a0.is_zero() {
        return Some(BigInt::zero());
    }
    let mut candidates = vec![BigInt::one(), -BigInt::one()];
    let abs = a0.abs();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= abs && d <= limit {
        if (&abs % &d).is_zero() {
            let q = &abs / &d;
            candidates.push(d.clone());
            candidates.push(-d.clone());
            candidates.push(q.clone());
            candidates.push(-q);
        }
        d += 1;
    }
    candidates.push(abs.clone());
    candidates.push(-abs);
    for c in candidates {
        if eval_int(f, &c).is_zero() {
            return Some(c);
        }
    }
    None
}

fn eval_int(f: &[BigInt], at: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * at + c;
    }
    acc
}

fn euler_phi(n: usize) -> usize {
    let mut n = n;
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            result -= result / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The c-th cyclotomic polynomial, ascending integer coefficients, computed
/// by exact division of t^c - 1 by the cyclotomic polynomials of the proper
/// divisors of c.
pub fn cyclotomic(c: usize) -> Vec<BigInt> {
    assert!(c >= 1);
    let q = FieldDescriptor::Rationals;
    // t^c - 1
    let mut coeffs = vec![FieldElement::Rat(BigRational::zero()); c + 1];
    coeffs[0] = FieldElement::Rat(-BigRational::one());
    coeffs[c] = FieldElement::Rat(BigRational::one());
    let mut num = Polynomial::new(coeffs, &q);
    for d in 1..c {
        if c % d == 0 {
            let phi_d = to_rational_poly(&cyclotomic(d));
            num = num.div_exact(&phi_d, &q).expect("cyclotomic division is exact");
        }
    }
    num.coeffs()
        .iter()
        .map(|e| match e {
            FieldElement::Rat(r) => {
                assert!(r.is_integer());
                r.to_integer()
            }
            _ => unreachable!(),
        })
        .collect()
}

/// Recognizes `f` as the c-th cyclotomic polynomial by exact comparison.
/// Returns the conductor c when found.
pub fn as_cyclotomic(f: &[BigInt]) -> Option<usize> {
    let k = f.len().checked_sub(1)?;
    if k == 0 {
        return None;
    }
    // phi(c) = k forces c <= 2k^2 + 6 comfortably for the search range.
    let bound = 2 * k * k + 6;
    for c in 1..=bound {
        if euler_phi(c) != k {
            continue;
        }
        if cyclotomic(c) == f {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Independent oracle: discriminant through the Sylvester matrix of
    /// (f, f') with a fraction-based Gaussian determinant.
    fn sylvester_discriminant(f: &[i64]) -> BigInt {
        let k = f.len() - 1;
        assert!(f[k] == 1);
        let fp: Vec<i64> = (1..=k).map(|i| f[i] * i as i64).collect();
        let m = k;
        let n = k - 1;
        let size = m + n;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        // n rows of f, descending coefficients, shifted
        for r in 0..n {
            for (j, c) in f.iter().rev().enumerate() {
                mat[r][r + j] = BigRational::from(b(*c));
            }
        }
        // m rows of f'
        for r in 0..m {
            for (j, c) in fp.iter().rev().enumerate() {
                mat[n + r][r + j] = BigRational::from(b(*c));
            }
        }
        let det = determinant(mat);
        assert!(det.is_integer());
        let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
        det.to_integer() * b(sign)
    }

    fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
        let n = m.len();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return BigRational::zero(),
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col].clone();
            let inv = m[col][col].recip();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone() * &inv;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }

    #[test]
    fn discriminant_of_linear_is_one() {
        assert_eq!(discriminant(&[b(0), b(1)]).unwrap(), b(1));
    }

    #[test]
    fn discriminant_matches_sylvester_oracle() {
        // expected values frozen from the oracle
        let cases: Vec<(Vec<i64>, i64)> = vec![
            (vec![1, 0, 1], -4),
            (vec![-1, -1, 1], 5),
            (vec![1, 1, 0, 1], -31),
            (vec![-2, 0, 0, 1], -108),
        ];
        for (f, expected) in cases {
            assert_eq!(sylvester_discriminant(&f), b(expected), "oracle for {:?}", f);
            let fi: Vec<BigInt> = f.iter().map(|&c| b(c)).collect();
            assert_eq!(discriminant(&fi).unwrap(), b(expected), "impl for {:?}", f);
        }
    }

    #[test]
    fn discriminant_rejects_non_monic() {
        assert!(matches!(
            discriminant(&[b(1), b(2)]),
            Err(Error::NotMonic)
        ));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![b(-1), b(1)]);
        assert_eq!(cyclotomic(4), vec![b(1), b(0), b(1)]);
        assert_eq!(cyclotomic(5), vec![b(1), b(1), b(1), b(1), b(1)]);
        assert_eq!(cyclotomic(8), vec![b(1), b(0), b(0), b(0), b(1)]);
        assert_eq!(as_cyclotomic(&[b(1), b(0), b(1)]), Some(4));
        assert_eq!(as_cyclotomic(&[b(-2), b(0), b(1)]), None);
    }

    #[test]
    fn rational_root_search() {
        // t^2 - t - 2 = (t - 2)(t + 1)
        let f = [b(-2), b(-1), b(1)];
        let r = rational_root(&f).expect("has integer roots");
        assert!(eval_int(&f, &r).is_zero());
        assert_eq!(rational_root(&[b(1), b(0), b(1)]), None);
    }
}
