//! Exact arithmetic for the supported field towers.
//!
//! A [`FieldDescriptor`] names one of five kinds of field: the rationals,
//! a number field Q(a) given by an integer minimal polynomial, a finite
//! field GF(p^d), a univariate function field P(x) over one of the
//! previous three, or an algebraic extension L(b) of a univariate
//! function field. [`FieldElement`] values are coordinate data relative
//! to a descriptor, kept in canonical form so that equality is
//! coordinate equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub mod finite;
pub mod intpoly;
pub mod parse;
pub mod poly;

pub use poly::Polynomial;

static RATIONALS: FieldDescriptor = FieldDescriptor::Rationals;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldDescriptor {
    /// The rational numbers.
    Rationals,
    /// Q(a) where `a` has the given monic irreducible minimal polynomial,
    /// stored as ascending integer coefficients (leading coefficient 1).
    NumberField { min_poly: Vec<BigInt> },
    /// GF(p^d) presented as GF(p)[t] modulo a monic irreducible polynomial
    /// of degree d, stored as ascending coefficients in `[0, p)`.
    FiniteField { p: u64, min_poly: Vec<u64> },
    /// P(x), rational functions in one variable over `base`.
    FunctionField {
        base: Arc<FieldDescriptor>,
        var: String,
    },
    /// L(b) where L = P(x) is `base` and `b` has the given monic minimal
    /// polynomial with coefficients in P[x] (denominator-free).
    AlgFunctionField {
        base: Arc<FieldDescriptor>,
        min_poly: Vec<Polynomial>,
        var: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Rat(BigRational),
    /// Coordinates on the power basis 1, a, ..., a^(k-1); always length k.
    NumField(Vec<BigRational>),
    /// Coordinates on 1, t, ..., t^(d-1); always length d, entries in [0, p).
    Fin(Vec<u64>),
    /// num/den over the base of the function field; den is monic and
    /// coprime to num, zero is 0/1.
    RatFunc { num: Polynomial, den: Polynomial },
    /// Coordinates on 1, b, ..., b^(e-1); always length e.
    AlgFunc(Vec<FieldElement>),
}

impl FieldDescriptor {
    pub fn rationals() -> Arc<Self> {
        Arc::new(FieldDescriptor::Rationals)
    }

    /// A number field from an ascending monic integer minimal polynomial of
    /// degree at least 2. Irreducibility over Q is verified where cheaply
    /// certifiable (rational roots, cyclotomic recognition, factor-degree
    /// sieve modulo small primes); a reducible polynomial that evades these
    /// checks surfaces later as an arithmetic error when a zero divisor is
    /// inverted.
    pub fn number_field(min_poly: Vec<BigInt>) -> Result<Arc<Self>> {
        if min_poly.len() < 3 {
            return Err(Error::InvalidInput(
                "number field minimal polynomial must have degree >= 2".into(),
            ));
        }
        if min_poly.last().map(|c| !c.is_one()).unwrap_or(true) {
            return Err(Error::NotMonic);
        }
        if let Some(root) = intpoly::rational_root(&min_poly) {
            return Err(Error::ReduciblePolynomial(format!("t - ({})", root)));
        }
        Ok(Arc::new(FieldDescriptor::NumberField { min_poly }))
    }

    pub fn prime_field(p: u64) -> Result<Arc<Self>> {
        Self::finite_field(p, 1)
    }

    /// GF(p^d) with a deterministically chosen irreducible polynomial.
    pub fn finite_field(p: u64, d: usize) -> Result<Arc<Self>> {
        check_prime(p)?;
        if d == 0 {
            return Err(Error::InvalidInput("finite field degree must be >= 1".into()));
        }
        let min_poly = finite::find_irreducible(p, d);
        Ok(Arc::new(FieldDescriptor::FiniteField { p, min_poly }))
    }

    /// GF(p^d) with an explicit defining polynomial, ascending coefficients.
    pub fn finite_field_with_poly(p: u64, mut min_poly: Vec<u64>) -> Result<Arc<Self>> {
        check_prime(p)?;
        for c in min_poly.iter_mut() {
            *c %= p;
        }
        while min_poly.last() == Some(&0) {
            min_poly.pop();
        }
        if min_poly.len() < 2 {
            return Err(Error::InvalidInput(
                "finite field polynomial must have degree >= 1".into(),
            ));
        }
        if *min_poly.last().unwrap() != 1 {
            return Err(Error::NotMonic);
        }
        if !finite::pf_is_irreducible(&min_poly, p) {
            return Err(Error::ReduciblePolynomial(
                "defining polynomial is reducible mod p".into(),
            ));
        }
        Ok(Arc::new(FieldDescriptor::FiniteField { p, min_poly }))
    }

    pub fn function_field(base: Arc<FieldDescriptor>, var: &str) -> Result<Arc<Self>> {
        match &*base {
            FieldDescriptor::Rationals
            | FieldDescriptor::NumberField { .. }
            | FieldDescriptor::FiniteField { .. } => Ok(Arc::new(FieldDescriptor::FunctionField {
                base,
                var: var.to_string(),
            })),
            FieldDescriptor::FunctionField { .. } => Err(Error::Unsupported(
                "multivariate function fields are not supported (one variable only)".into(),
            )),
            FieldDescriptor::AlgFunctionField { .. } => Err(Error::Unsupported(
                "function fields over algebraic function fields are not supported".into(),
            )),
        }
    }

    /// L(b) for L = P(x). `min_poly` lists ascending coefficients of the
    /// minimal polynomial of `b` as polynomials in x over P; it must be monic
    /// of degree >= 2.
    pub fn alg_function_field(
        base: Arc<FieldDescriptor>,
        min_poly: Vec<Polynomial>,
        var: &str,
    ) -> Result<Arc<Self>> {
        let inner = match &*base {
            FieldDescriptor::FunctionField { base, .. } => base.clone(),
            _ => {
                return Err(Error::InvalidInput(
                    "algebraic function field base must be a function field".into(),
                ))
            }
        };
        if min_poly.len() < 3 {
            return Err(Error::InvalidInput(
                "algebraic function field minimal polynomial must have degree >= 2".into(),
            ));
        }
        match min_poly.last() {
            Some(lead) if lead.is_one(&inner) => {}
            _ => return Err(Error::NotMonic),
        }
        Ok(Arc::new(FieldDescriptor::AlgFunctionField {
            base,
            min_poly,
            var: var.to_string(),
        }))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals | FieldDescriptor::NumberField { .. } => 0,
            FieldDescriptor::FiniteField { p, .. } => *p,
            FieldDescriptor::FunctionField { base, .. }
            | FieldDescriptor::AlgFunctionField { base, .. } => base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::FiniteField { .. })
    }

    /// Extension degree over the prime field for finite fields.
    pub fn finite_degree(&self) -> Option<usize> {
        match self {
            FieldDescriptor::FiniteField { min_poly, .. } => Some(min_poly.len() - 1),
            _ => None,
        }
    }

    /// Number of elements of a finite field.
    pub fn finite_order(&self) -> Option<BigUint> {
        match self {
            FieldDescriptor::FiniteField { p, min_poly } => {
                Some(BigUint::from(*p).pow((min_poly.len() - 1) as u32))
            }
            _ => None,
        }
    }

    pub fn base(&self) -> Option<&Arc<FieldDescriptor>> {
        match self {
            FieldDescriptor::FunctionField { base, .. }
            | FieldDescriptor::AlgFunctionField { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match self {
            FieldDescriptor::FunctionField { var, .. }
            | FieldDescriptor::AlgFunctionField { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Degree of the top extension: k for Q(a), d for GF(p^d), e for L(b).
    pub fn extension_degree(&self) -> usize {
        match self {
            FieldDescriptor::Rationals | FieldDescriptor::FunctionField { .. } => 1,
            FieldDescriptor::NumberField { min_poly } => min_poly.len() - 1,
            FieldDescriptor::FiniteField { min_poly, .. } => min_poly.len() - 1,
            FieldDescriptor::AlgFunctionField { min_poly, .. } => min_poly.len() - 1,
        }
    }

    // ----- element constructors -----

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => FieldElement::Rat(BigRational::zero()),
            FieldDescriptor::NumberField { min_poly } => {
                FieldElement::NumField(vec![BigRational::zero(); min_poly.len() - 1])
            }
            FieldDescriptor::FiniteField { min_poly, .. } => {
                FieldElement::Fin(vec![0; min_poly.len() - 1])
            }
            FieldDescriptor::FunctionField { .. } => FieldElement::RatFunc {
                num: Polynomial::zero(),
                den: Polynomial::one(self.base_field()),
            },
            FieldDescriptor::AlgFunctionField { base, min_poly, .. } => {
                FieldElement::AlgFunc(vec![base.zero(); min_poly.len() - 1])
            }
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => FieldElement::Rat(BigRational::from(v.clone())),
            FieldDescriptor::NumberField { min_poly } => {
                let mut coords = vec![BigRational::zero(); min_poly.len() - 1];
                coords[0] = BigRational::from(v.clone());
                FieldElement::NumField(coords)
            }
            FieldDescriptor::FiniteField { p, min_poly } => {
                let mut coords = vec![0; min_poly.len() - 1];
                coords[0] = finite::bigint_mod_p(v, *p);
                FieldElement::Fin(coords)
            }
            FieldDescriptor::FunctionField { base, .. } => FieldElement::RatFunc {
                num: Polynomial::constant(base.from_bigint(v), base),
                den: Polynomial::one(base),
            },
            FieldDescriptor::AlgFunctionField { base, min_poly, .. } => {
                let mut coords = vec![base.zero(); min_poly.len() - 1];
                coords[0] = base.from_bigint(v);
                FieldElement::AlgFunc(coords)
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        if q.denom().is_one() {
            return Ok(self.from_bigint(q.numer()));
        }
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
    }

    /// The distinguished generator: a, t (class of the defining variable),
    /// x, or b. None for the rationals and for prime fields.
    pub fn generator(&self) -> Option<FieldElement> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::NumberField { min_poly } => {
                let k = min_poly.len() - 1;
                let mut coords = vec![BigRational::zero(); k];
                coords[1] = BigRational::one();
                Some(FieldElement::NumField(coords))
            }
            FieldDescriptor::FiniteField { min_poly, .. } => {
                let d = min_poly.len() - 1;
                if d == 1 {
                    None
                } else {
                    let mut coords = vec![0; d];
                    coords[1] = 1;
                    Some(FieldElement::Fin(coords))
                }
            }
            FieldDescriptor::FunctionField { base, .. } => Some(FieldElement::RatFunc {
                num: Polynomial::var(base),
                den: Polynomial::one(base),
            }),
            FieldDescriptor::AlgFunctionField { base, min_poly, .. } => {
                let e = min_poly.len() - 1;
                let mut coords = vec![base.zero(); e];
                coords[1] = base.one();
                Some(FieldElement::AlgFunc(coords))
            }
        }
    }

    fn base_field(&self) -> &FieldDescriptor {
        match self {
            FieldDescriptor::FunctionField { base, .. } => base,
            _ => &RATIONALS,
        }
    }

    // ----- predicates -----

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rat(r) => r.is_zero(),
            FieldElement::NumField(c) => c.iter().all(|x| x.is_zero()),
            FieldElement::Fin(c) => c.iter().all(|x| *x == 0),
            FieldElement::RatFunc { num, .. } => num.is_zero(),
            FieldElement::AlgFunc(c) => {
                let base = self.base().expect("alg function field");
                c.iter().all(|x| base.is_zero(x))
            }
        }
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        *a == self.one()
    }

    // ----- arithmetic -----

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldDescriptor::Rationals, FieldElement::Rat(x), FieldElement::Rat(y)) => {
                FieldElement::Rat(x + y)
            }
            (
                FieldDescriptor::NumberField { .. },
                FieldElement::NumField(x),
                FieldElement::NumField(y),
            ) => FieldElement::NumField(x.iter().zip(y).map(|(u, v)| u + v).collect()),
            (
                FieldDescriptor::FiniteField { p, .. },
                FieldElement::Fin(x),
                FieldElement::Fin(y),
            ) => FieldElement::Fin(finite::elt_add(x, y, *p)),
            (
                FieldDescriptor::FunctionField { base, .. },
                FieldElement::RatFunc { num: n1, den: d1 },
                FieldElement::RatFunc { num: n2, den: d2 },
            ) => {
                let num = n1.mul(d2, base).add(&n2.mul(d1, base), base);
                let den = d1.mul(d2, base);
                canonical_ratfunc(num, den, base)
            }
            (
                FieldDescriptor::AlgFunctionField { base, .. },
                FieldElement::AlgFunc(x),
                FieldElement::AlgFunc(y),
            ) => FieldElement::AlgFunc(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect()),
            _ => panic!("field element does not match descriptor"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (FieldDescriptor::Rationals, FieldElement::Rat(x)) => FieldElement::Rat(-x),
            (FieldDescriptor::NumberField { .. }, FieldElement::NumField(x)) => {
                FieldElement::NumField(x.iter().map(|u| -u).collect())
            }
            (FieldDescriptor::FiniteField { p, .. }, FieldElement::Fin(x)) => {
                FieldElement::Fin(finite::elt_neg(x, *p))
            }
            (FieldDescriptor::FunctionField { base, .. }, FieldElement::RatFunc { num, den }) => {
                FieldElement::RatFunc {
                    num: num.neg(base),
                    den: den.clone(),
                }
            }
            (FieldDescriptor::AlgFunctionField { base, .. }, FieldElement::AlgFunc(x)) => {
                FieldElement::AlgFunc(x.iter().map(|u| base.neg(u)).collect())
            }
            _ => panic!("field element does not match descriptor"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldDescriptor::Rationals, FieldElement::Rat(x), FieldElement::Rat(y)) => {
                FieldElement::Rat(x * y)
            }
            (
                FieldDescriptor::NumberField { min_poly },
                FieldElement::NumField(x),
                FieldElement::NumField(y),
            ) => {
                let k = min_poly.len() - 1;
                let mut prod = vec![BigRational::zero(); 2 * k - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        prod[i + j] += u * v;
                    }
                }
                // reduce by t^k = -(f_0 + ... + f_{k-1} t^{k-1})
                for i in (k..prod.len()).rev() {
                    if prod[i].is_zero() {
                        continue;
                    }
                    let c = std::mem::replace(&mut prod[i], BigRational::zero());
                    for j in 0..k {
                        let f = BigRational::from(min_poly[j].clone());
                        prod[i - k + j] -= &c * f;
                    }
                }
                prod.truncate(k);
                FieldElement::NumField(prod)
            }
            (
                FieldDescriptor::FiniteField { p, min_poly },
                FieldElement::Fin(x),
                FieldElement::Fin(y),
            ) => FieldElement::Fin(finite::elt_mul(x, y, *p, min_poly)),
            (
                FieldDescriptor::FunctionField { base, .. },
                FieldElement::RatFunc { num: n1, den: d1 },
                FieldElement::RatFunc { num: n2, den: d2 },
            ) => {
                let num = n1.mul(n2, base);
                let den = d1.mul(d2, base);
                canonical_ratfunc(num, den, base)
            }
            (
                FieldDescriptor::AlgFunctionField { base, .. },
                FieldElement::AlgFunc(x),
                FieldElement::AlgFunc(y),
            ) => {
                let f = self.top_min_poly_over_base();
                let e = f.degree().unwrap();
                let mut prod = vec![base.zero(); 2 * e - 1];
                for (i, u) in x.iter().enumerate() {
                    if base.is_zero(u) {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        let t = base.mul(u, v);
                        prod[i + j] = base.add(&prod[i + j], &t);
                    }
                }
                for i in (e..prod.len()).rev() {
                    if base.is_zero(&prod[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut prod[i], base.zero());
                    for j in 0..e {
                        let t = base.mul(&c, &f.coeff(j, base));
                        prod[i - e + j] = base.sub(&prod[i - e + j], &t);
                    }
                }
                prod.truncate(e);
                FieldElement::AlgFunc(prod)
            }
            _ => panic!("field element does not match descriptor"),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match (self, a) {
            (FieldDescriptor::Rationals, FieldElement::Rat(x)) => {
                Ok(FieldElement::Rat(x.recip()))
            }
            (FieldDescriptor::NumberField { min_poly }, FieldElement::NumField(x)) => {
                let k = min_poly.len() - 1;
                let f = Polynomial::new(
                    min_poly
                        .iter()
                        .map(|c| FieldElement::Rat(BigRational::from(c.clone())))
                        .collect(),
                    &RATIONALS,
                );
                let ap = Polynomial::new(
                    x.iter().map(|c| FieldElement::Rat(c.clone())).collect(),
                    &RATIONALS,
                );
                let (g, s, _) = ap.ext_gcd(&f, &RATIONALS)?;
                if !g.is_one(&RATIONALS) {
                    return Err(Error::ReduciblePolynomial(g.format("t", &RATIONALS)));
                }
                let s = s.rem(&f, &RATIONALS)?;
                let mut coords = vec![BigRational::zero(); k];
                for (i, c) in s.coeffs().iter().enumerate() {
                    if let FieldElement::Rat(r) = c {
                        coords[i] = r.clone();
                    }
                }
                Ok(FieldElement::NumField(coords))
            }
            (FieldDescriptor::FiniteField { p, min_poly }, FieldElement::Fin(x)) => {
                Ok(FieldElement::Fin(finite::elt_inv(x, *p, min_poly)?))
            }
            (FieldDescriptor::FunctionField { base, .. }, FieldElement::RatFunc { num, den }) => {
                Ok(canonical_ratfunc(den.clone(), num.clone(), base))
            }
            (FieldDescriptor::AlgFunctionField { base, .. }, FieldElement::AlgFunc(x)) => {
                let f = self.top_min_poly_over_base();
                let e = f.degree().unwrap();
                let ap = Polynomial::new(x.clone(), base);
                let (g, s, _) = ap.ext_gcd(&f, base)?;
                if !g.is_one(base) {
                    return Err(Error::ReduciblePolynomial(
                        g.format(self.var().unwrap_or("b"), base),
                    ));
                }
                let s = s.rem(&f, base)?;
                let mut coords = vec![base.zero(); e];
                for (i, c) in s.coeffs().iter().enumerate() {
                    coords[i] = c.clone();
                }
                Ok(FieldElement::AlgFunc(coords))
            }
            _ => panic!("field element does not match descriptor"),
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// The minimal polynomial of the top extension generator as a polynomial
    /// over the immediate base field (L for L(b)).
    pub fn top_min_poly_over_base(&self) -> Polynomial {
        match self {
            FieldDescriptor::AlgFunctionField { base, min_poly, .. } => {
                let inner = match &**base {
                    FieldDescriptor::FunctionField { base, .. } => base,
                    _ => unreachable!("alg function field base is a function field"),
                };
                let coeffs = min_poly
                    .iter()
                    .map(|p| FieldElement::RatFunc {
                        num: p.clone(),
                        den: Polynomial::one(inner),
                    })
                    .collect();
                Polynomial::new(coeffs, base)
            }
            _ => panic!("top_min_poly_over_base requires an algebraic function field"),
        }
    }

    /// Canonical total ordering of elements of this field; used only to make
    /// lists and dedup operations deterministic.
    pub fn cmp_elements(&self, a: &FieldElement, b: &FieldElement) -> Ordering {
        match (a, b) {
            (FieldElement::Rat(x), FieldElement::Rat(y)) => x.cmp(y),
            (FieldElement::NumField(x), FieldElement::NumField(y)) => x.cmp(y),
            (FieldElement::Fin(x), FieldElement::Fin(y)) => x.cmp(y),
            (
                FieldElement::RatFunc { num: n1, den: d1 },
                FieldElement::RatFunc { num: n2, den: d2 },
            ) => {
                let base = self.base().expect("function field");
                base.cmp_polys(d1, d2).then_with(|| base.cmp_polys(n1, n2))
            }
            (FieldElement::AlgFunc(x), FieldElement::AlgFunc(y)) => {
                let base = self.base().expect("alg function field");
                for (u, v) in x.iter().zip(y.iter()) {
                    match base.cmp_elements(u, v) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            _ => panic!("field element does not match descriptor"),
        }
    }

    fn cmp_polys(&self, a: &Polynomial, b: &Polynomial) -> Ordering {
        a.cmp_canonical(b, self)
    }

    // ----- formatting -----

    /// Canonical string form of an element, following the element grammar
    /// used for matrix entries in group files.
    pub fn format(&self, a: &FieldElement) -> String {
        match (self, a) {
            (_, FieldElement::Rat(r)) => format_rational(r),
            (FieldDescriptor::NumberField { .. }, FieldElement::NumField(c)) => {
                let poly = Polynomial::new(
                    c.iter().map(|x| FieldElement::Rat(x.clone())).collect(),
                    &RATIONALS,
                );
                poly.format("a", &RATIONALS)
            }
            (FieldDescriptor::FiniteField { .. }, FieldElement::Fin(c)) => {
                if c.len() == 1 {
                    return c[0].to_string();
                }
                let mut parts: Vec<String> = Vec::new();
                for (i, v) in c.iter().enumerate().rev() {
                    if *v == 0 {
                        continue;
                    }
                    let body = match i {
                        0 => v.to_string(),
                        1 if *v == 1 => "a".to_string(),
                        1 => format!("{}*a", v),
                        _ if *v == 1 => format!("a^{}", i),
                        _ => format!("{}*a^{}", v, i),
                    };
                    parts.push(body);
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                }
            }
            (FieldDescriptor::FunctionField { base, var }, FieldElement::RatFunc { num, den }) => {
                if den.is_one(base) {
                    num.format(var, base)
                } else {
                    format!("({})/({})", num.format(var, base), den.format(var, base))
                }
            }
            (FieldDescriptor::AlgFunctionField { base, var, .. }, FieldElement::AlgFunc(c)) => {
                let mut parts: Vec<String> = Vec::new();
                for (i, v) in c.iter().enumerate().rev() {
                    if base.is_zero(v) {
                        continue;
                    }
                    let coeff = base.format(v);
                    let body = match i {
                        0 => format!("({})", coeff),
                        _ => {
                            let pow = if i == 1 {
                                var.clone()
                            } else {
                                format!("{}^{}", var, i)
                            };
                            if coeff == "1" {
                                pow
                            } else {
                                format!("({})*{}", coeff, pow)
                            }
                        }
                    };
                    parts.push(body);
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                }
            }
            _ => panic!("field element does not match descriptor"),
        }
    }

    /// Splits off a leading sign where the element is "sign-atomic" (the
    /// rationals); composite elements come back unsigned so polynomial
    /// printers parenthesize them instead.
    pub fn format_signed(&self, a: &FieldElement) -> (bool, String) {
        match a {
            FieldElement::Rat(r) => {
                if r.is_negative() {
                    (true, format_rational(&-r))
                } else {
                    (false, format_rational(r))
                }
            }
            _ => (false, self.format(a)),
        }
    }

    /// Re-derives the canonical form of an element (reduced fractions, monic
    /// denominators, in-range residues). Well-formed values produced by this
    /// crate are already canonical; this normalizes externally built data.
    pub fn canonicalize(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (FieldDescriptor::Rationals, FieldElement::Rat(r)) => {
                FieldElement::Rat(r.reduced())
            }
            (FieldDescriptor::NumberField { .. }, FieldElement::NumField(c)) => {
                FieldElement::NumField(c.iter().map(|x| x.reduced()).collect())
            }
            (FieldDescriptor::FiniteField { p, .. }, FieldElement::Fin(c)) => {
                FieldElement::Fin(c.iter().map(|x| x % p).collect())
            }
            (FieldDescriptor::FunctionField { base, .. }, FieldElement::RatFunc { num, den }) => {
                canonical_ratfunc(num.clone(), den.clone(), base)
            }
            (FieldDescriptor::AlgFunctionField { base, .. }, FieldElement::AlgFunc(c)) => {
                FieldElement::AlgFunc(c.iter().map(|x| base.canonicalize(x)).collect())
            }
            _ => panic!("field element does not match descriptor"),
        }
    }
}

/// Reduce a num/den pair to canonical form: coprime, monic denominator.
fn canonical_ratfunc(num: Polynomial, den: Polynomial, base: &FieldDescriptor) -> FieldElement {
    assert!(!den.is_zero(), "rational function with zero denominator");
    if num.is_zero() {
        return FieldElement::RatFunc {
            num: Polynomial::zero(),
            den: Polynomial::one(base),
        };
    }
    let g = num
        .gcd(&den, base)
        .expect("gcd over a validated coefficient field");
    let mut num = num.div_exact(&g, base).expect("gcd divides");
    let mut den = den.div_exact(&g, base).expect("gcd divides");
    let lc_inv = base
        .inv(den.leading().unwrap())
        .expect("nonzero leading coefficient");
    num = num.scalar_mul(&lc_inv, base);
    den = den.scalar_mul(&lc_inv, base);
    FieldElement::RatFunc { num, den }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p >= 1 << 31 {
        return Err(Error::Unsupported(
            "finite field characteristic must be below 2^31".into(),
        ));
    }
    if !finite::is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{} is not prime", p)));
    }
    Ok(())
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::NumberField { min_poly } => {
                let poly = Polynomial::new(
                    min_poly
                        .iter()
                        .map(|c| FieldElement::Rat(BigRational::from(c.clone())))
                        .collect(),
                    &RATIONALS,
                );
                write!(f, "Q(a) with {} = 0", poly.format("a", &RATIONALS))
            }
            FieldDescriptor::FiniteField { p, min_poly } => {
                let d = min_poly.len() - 1;
                if d == 1 {
                    write!(f, "GF({})", p)
                } else {
                    write!(f, "GF({}^{})", p, d)
                }
            }
            FieldDescriptor::FunctionField { base, var } => write!(f, "{}({})", base, var),
            FieldDescriptor::AlgFunctionField { base, var, min_poly } => {
                write!(f, "{}({}) of degree {}", base, var, min_poly.len() - 1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn gaussian() -> Arc<FieldDescriptor> {
        // Q(a), a^2 + 1 = 0
        FieldDescriptor::number_field(vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)])
            .unwrap()
    }

    fn gf5() -> Arc<FieldDescriptor> {
        FieldDescriptor::prime_field(5).unwrap()
    }

    fn gf9() -> Arc<FieldDescriptor> {
        FieldDescriptor::finite_field_with_poly(3, vec![1, 0, 1]).unwrap()
    }

    fn qx() -> Arc<FieldDescriptor> {
        FieldDescriptor::function_field(q(), "x").unwrap()
    }

    fn gf19x() -> Arc<FieldDescriptor> {
        FieldDescriptor::function_field(FieldDescriptor::prime_field(19).unwrap(), "x").unwrap()
    }

    fn qx_sqrt_x() -> Arc<FieldDescriptor> {
        // L(b) with b^2 = x over L = Q(x)
        let base = qx();
        let inner = q();
        let minus_x = Polynomial::new(
            vec![inner.zero(), inner.from_i64(-1)],
            &inner,
        );
        let f = vec![minus_x, Polynomial::zero(), Polynomial::one(&inner)];
        FieldDescriptor::alg_function_field(base, f, "b").unwrap()
    }

    fn sample(field: &Arc<FieldDescriptor>, rng: &mut ChaCha8Rng) -> FieldElement {
        match &**field {
            FieldDescriptor::Rationals => {
                let n = rng.gen_range(-12i64..=12);
                let d = rng.gen_range(1i64..=9);
                field
                    .div(&field.from_i64(n), &field.from_i64(d))
                    .unwrap()
            }
            FieldDescriptor::NumberField { min_poly } => {
                let k = min_poly.len() - 1;
                let coords = (0..k)
                    .map(|_| {
                        BigRational::new(
                            BigInt::from(rng.gen_range(-9i64..=9)),
                            BigInt::from(rng.gen_range(1i64..=5)),
                        )
                    })
                    .collect();
                FieldElement::NumField(coords)
            }
            FieldDescriptor::FiniteField { p, min_poly } => {
                let d = min_poly.len() - 1;
                FieldElement::Fin((0..d).map(|_| rng.gen_range(0..*p)).collect())
            }
            FieldDescriptor::FunctionField { base, .. } => {
                let deg_n = rng.gen_range(0usize..=2);
                let deg_d = rng.gen_range(0usize..=1);
                let mut inner_rng = ChaCha8Rng::seed_from_u64(rng.gen());
                let num = Polynomial::new(
                    (0..=deg_n)
                        .map(|_| sample_base(base, &mut inner_rng))
                        .collect(),
                    base,
                );
                let mut den = Polynomial::zero();
                while den.is_zero() {
                    den = Polynomial::new(
                        (0..=deg_d)
                            .map(|_| sample_base(base, &mut inner_rng))
                            .collect(),
                        base,
                    );
                }
                canonical_ratfunc(num, den, base)
            }
            FieldDescriptor::AlgFunctionField { base, min_poly, .. } => {
                let e = min_poly.len() - 1;
                let mut inner_rng = ChaCha8Rng::seed_from_u64(rng.gen());
                FieldElement::AlgFunc(
                    (0..e)
                        .map(|_| {
                            let b: Arc<FieldDescriptor> = base.clone();
                            sample(&b, &mut inner_rng)
                        })
                        .collect(),
                )
            }
        }
    }

    fn sample_base(base: &Arc<FieldDescriptor>, rng: &mut ChaCha8Rng) -> FieldElement {
        match &**base {
            FieldDescriptor::Rationals | FieldDescriptor::NumberField { .. } => {
                base.from_i64(rng.gen_range(-6i64..=6))
            }
            FieldDescriptor::FiniteField { p, min_poly } => {
                let d = min_poly.len() - 1;
                FieldElement::Fin((0..d).map(|_| rng.gen_range(0..*p)).collect())
            }
            _ => unreachable!(),
        }
    }

    fn all_fields() -> Vec<Arc<FieldDescriptor>> {
        vec![q(), gaussian(), gf5(), gf9(), qx(), gf19x(), qx_sqrt_x()]
    }

    #[test]
    fn rational_addition() {
        let f = q();
        let half = f.div(&f.from_i64(1), &f.from_i64(2)).unwrap();
        let third = f.div(&f.from_i64(1), &f.from_i64(3)).unwrap();
        let expected = f.div(&f.from_i64(5), &f.from_i64(6)).unwrap();
        assert_eq!(f.add(&half, &third), expected);
    }

    #[test]
    fn gaussian_generator_squares_to_minus_one() {
        let f = gaussian();
        let a = f.generator().unwrap();
        assert_eq!(f.mul(&a, &a), f.from_i64(-1));
    }

    #[test]
    fn rational_function_cancellation() {
        let f = qx();
        let e = parse::parse_element("(x^2 - 1)/(x - 1)", &f).unwrap();
        let expected = parse::parse_element("x + 1", &f).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        for f in all_fields() {
            assert!(matches!(f.inv(&f.zero()), Err(Error::DivisionByZero)));
        }
    }

    #[test]
    fn field_axioms_hold_on_random_samples() {
        for f in all_fields() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..40 {
                let a = sample(&f, &mut rng);
                let b = sample(&f, &mut rng);
                let c = sample(&f, &mut rng);
                let assoc_l = f.add(&f.add(&a, &b), &c);
                let assoc_r = f.add(&a, &f.add(&b, &c));
                assert_eq!(assoc_l, assoc_r, "additive associativity in {}", f);
                let massoc_l = f.mul(&f.mul(&a, &b), &c);
                let massoc_r = f.mul(&a, &f.mul(&b, &c));
                assert_eq!(massoc_l, massoc_r, "multiplicative associativity in {}", f);
                let dist_l = f.mul(&a, &f.add(&b, &c));
                let dist_r = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                assert_eq!(dist_l, dist_r, "distributivity in {}", f);
                if !f.is_zero(&a) {
                    let inv = f.inv(&a).unwrap();
                    assert!(f.is_one(&f.mul(&a, &inv)), "a * a^-1 = 1 in {}", f);
                }
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for f in all_fields() {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..30 {
                let a = sample(&f, &mut rng);
                let once = f.canonicalize(&a);
                assert_eq!(once, f.canonicalize(&once));
                assert_eq!(once, a, "samples are already canonical in {}", f);
            }
        }
    }

    #[test]
    fn parse_format_round_trip() {
        for f in all_fields() {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..30 {
                let a = sample(&f, &mut rng);
                let text = f.format(&a);
                let back = parse::parse_element(&text, &f).unwrap();
                assert_eq!(back, a, "round trip through '{}' in {}", text, f);
            }
        }
    }

    #[test]
    fn multivariate_request_is_rejected() {
        let err = FieldDescriptor::function_field(qx(), "y");
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }

    #[test]
    fn alg_function_field_arithmetic() {
        let f = qx_sqrt_x();
        let b = f.generator().unwrap();
        let x = parse::parse_element("x", &f).unwrap();
        assert_eq!(f.mul(&b, &b), x, "b^2 = x");
        let inv = f.inv(&b).unwrap();
        assert!(f.is_one(&f.mul(&b, &inv)));
    }
}
