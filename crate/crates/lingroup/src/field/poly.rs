//! Dense univariate polynomials over any supported field.
//!
//! Coefficients are stored in ascending degree order with no trailing
//! zeros, so the zero polynomial has an empty coefficient list. All
//! operations take the coefficient field as an explicit argument.

use num_bigint::BigUint;

use super::{FieldDescriptor, FieldElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<FieldElement>, field: &FieldDescriptor) -> Self {
        while let Some(c) = coeffs.last() {
            if field.is_zero(c) {
                coeffs.pop();
            } else {
                break;
            }
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        Polynomial {
            coeffs: vec![field.one()],
        }
    }

    pub fn constant(c: FieldElement, field: &FieldDescriptor) -> Self {
        Polynomial::new(vec![c], field)
    }

    /// The polynomial `t`.
    pub fn var(field: &FieldDescriptor) -> Self {
        Polynomial {
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, field: &FieldDescriptor) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self, field: &FieldDescriptor) -> bool {
        self.coeffs.len() == 1 && field.is_one(&self.coeffs[0])
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, field: &FieldDescriptor) -> bool {
        self.leading().map(|c| field.is_one(c)).unwrap_or(false)
    }

    pub fn add(&self, other: &Self, field: &FieldDescriptor) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff(i, field);
            let b = other.coeff(i, field);
            out.push(field.add(&a, &b));
        }
        Polynomial::new(out, field)
    }

    pub fn sub(&self, other: &Self, field: &FieldDescriptor) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff(i, field);
            let b = other.coeff(i, field);
            out.push(field.sub(&a, &b));
        }
        Polynomial::new(out, field)
    }

    pub fn neg(&self, field: &FieldDescriptor) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, field: &FieldDescriptor) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = field.mul(a, b);
                out[i + j] = field.add(&out[i + j], &prod);
            }
        }
        Polynomial::new(out, field)
    }

    pub fn scalar_mul(&self, s: &FieldElement, field: &FieldDescriptor) -> Self {
        if field.is_zero(s) {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| field.mul(c, s)).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize, field: &FieldDescriptor) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn divrem(&self, div: &Self, field: &FieldDescriptor) -> Result<(Self, Self)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lc_inv = field.inv(div.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = field.mul(rem.last().unwrap(), &lc_inv);
            if !field.is_zero(&factor) {
                for (j, dc) in div.coeffs.iter().enumerate() {
                    let sub = field.mul(&factor, dc);
                    rem[k + j] = field.sub(&rem[k + j], &sub);
                }
                quo[k] = factor;
            }
            rem.pop();
            while rem.last().map(|c| field.is_zero(c)).unwrap_or(false) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        Ok((
            Polynomial::new(quo, field),
            Polynomial { coeffs: rem },
        ))
    }

    pub fn rem(&self, div: &Self, field: &FieldDescriptor) -> Result<Self> {
        Ok(self.divrem(div, field)?.1)
    }

    /// Exact quotient; returns an error if the division leaves a remainder.
    pub fn div_exact(&self, div: &Self, field: &FieldDescriptor) -> Result<Self> {
        let (q, r) = self.divrem(div, field)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self, field: &FieldDescriptor) -> Result<Self> {
        match self.leading() {
            None => Ok(Polynomial::zero()),
            Some(lc) => {
                let inv = field.inv(lc)?;
                Ok(self.scalar_mul(&inv, field))
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self, field: &FieldDescriptor) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, field)?;
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// Extended gcd: returns monic `g` and `(s, t)` with `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Self, field: &FieldDescriptor) -> Result<(Self, Self, Self)> {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Polynomial::one(field);
        let mut s1 = Polynomial::zero();
        let mut t0 = Polynomial::zero();
        let mut t1 = Polynomial::one(field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, field)?;
            let s = s0.sub(&q.mul(&s1, field), field);
            let t = t0.sub(&q.mul(&t1, field), field);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return Ok((Polynomial::zero(), s0, t0));
        }
        let lc_inv = field.inv(r0.leading().unwrap())?;
        Ok((
            r0.scalar_mul(&lc_inv, field),
            s0.scalar_mul(&lc_inv, field),
            t0.scalar_mul(&lc_inv, field),
        ))
    }

    pub fn lcm(&self, other: &Self, field: &FieldDescriptor) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero());
        }
        let g = self.gcd(other, field)?;
        let q = self.div_exact(&g, field)?;
        q.mul(other, field).monic(field)
    }

    pub fn derivative(&self, field: &FieldDescriptor) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let k = field.from_i64(i as i64);
            out.push(field.mul(c, &k));
        }
        Polynomial::new(out, field)
    }

    pub fn eval(&self, at: &FieldElement, field: &FieldDescriptor) -> FieldElement {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.mul(&acc, at);
            acc = field.add(&acc, c);
        }
        acc
    }

    /// `self^exp mod modulus` by binary exponentiation.
    pub fn pow_mod(
        &self,
        exp: &BigUint,
        modulus: &Self,
        field: &FieldDescriptor,
    ) -> Result<Self> {
        let mut result = Polynomial::one(field).rem(modulus, field)?;
        let mut base = self.rem(modulus, field)?;
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                result = result.mul(&base, field).rem(modulus, field)?;
            }
            if i + 1 < bits {
                base = base.mul(&base, field).rem(modulus, field)?;
            }
        }
        Ok(result)
    }

    /// Largest squarefree divisor, valid in characteristic zero or when the
    /// derivative is non-zero.
    pub fn squarefree_part(&self, field: &FieldDescriptor) -> Result<Self> {
        let d = self.derivative(field);
        if d.is_zero() {
            return Ok(self.monic(field)?);
        }
        let g = self.gcd(&d, field)?;
        self.div_exact(&g, field)?.monic(field)
    }

    /// Resultant of `self` and `other` via a Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self, field: &FieldDescriptor) -> Result<FieldElement> {
        if self.is_zero() || other.is_zero() {
            return Ok(field.zero());
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = field.one();
        let mut sign_flip = false;
        while b.degree().unwrap() > 0 {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            let r = a.rem(&b, field)?;
            if r.is_zero() {
                return Ok(field.zero());
            }
            let dr = r.degree().unwrap();
            let lc_pow = field.pow(b.leading().unwrap(), (da - dr) as u64);
            acc = field.mul(&acc, &lc_pow);
            if da % 2 == 1 && db % 2 == 1 {
                sign_flip = !sign_flip;
            }
            a = b;
            b = r;
        }
        let c = b.coeffs[0].clone();
        let da = a.degree().unwrap() as u64;
        acc = field.mul(&acc, &field.pow(&c, da));
        if sign_flip {
            acc = field.neg(&acc);
        }
        Ok(acc)
    }

    /// Total ordering used to make factor lists deterministic: by degree,
    /// then lexicographically on the ascending coefficient vector.
    pub fn cmp_canonical(&self, other: &Self, field: &FieldDescriptor) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            match field.cmp_elements(a, b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Renders the polynomial in the variable `var`, highest power first.
    pub fn format(&self, var: &str, field: &FieldDescriptor) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let (neg, abs) = field.format_signed(c);
            let body = if i == 0 {
                abs
            } else {
                let pow = if i == 1 {
                    var.to_string()
                } else {
                    format!("{}^{}", var, i)
                };
                if abs == "1" {
                    pow
                } else {
                    let abs = if needs_parens(&abs) {
                        format!("({})", abs)
                    } else {
                        abs
                    };
                    format!("{}*{}", abs, pow)
                }
            };
            parts.push((neg, body));
        }
        let mut out = String::new();
        for (k, (neg, body)) in parts.iter().enumerate() {
            if k == 0 {
                if *neg {
                    out.push('-');
                }
            } else if *neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(body);
        }
        out
    }
}

fn needs_parens(s: &str) -> bool {
    s.chars().skip(1).any(|c| c == '+' || c == '-' || c == '*' || c == '/' || c == ' ')
}
