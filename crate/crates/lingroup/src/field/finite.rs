//! Finite-field arithmetic and univariate polynomial factorization.
//!
//! Elements of GF(p^d) are coefficient vectors over GF(p). The
//! factorization pipeline is squarefree decomposition, distinct-degree
//! splitting, then Cantor-Zassenhaus equal-degree splitting driven by a
//! seeded deterministic random stream.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FieldDescriptor, FieldElement, Polynomial};
use crate::error::{Error, Result};

// ----- scalar arithmetic mod p -----

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_mod(a, p - 2, p))
}

pub fn bigint_mod_p(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ----- polynomials over the prime field, as bare coefficient vectors -----

fn pf_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pf_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    pf_trim(&mut out);
    out
}

fn pf_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("monic-ish modulus");
    let mut r: Vec<u64> = a.to_vec();
    pf_trim(&mut r);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        if c != 0 {
            for (j, &mc) in m.iter().enumerate() {
                let sub = mul_mod(c, mc, p);
                r[k + j] = (r[k + j] + p - sub) % p;
            }
        }
        pf_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    r
}

fn pf_powmod_var(e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    // t^e mod m
    let mut result = vec![1u64];
    let mut base = pf_rem(&[0, 1], m, p);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = pf_rem(&pf_mul(&result, &base, p), m, p);
        }
        if i + 1 < bits {
            base = pf_rem(&pf_mul(&base, &base, p), m, p);
        }
    }
    result
}

fn pf_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    pf_trim(&mut a);
    pf_trim(&mut b);
    while !b.is_empty() {
        let r = pf_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p).unwrap();
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

fn pf_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    pf_trim(&mut out);
    out
}

/// Irreducibility over GF(p) by the Frobenius criterion.
pub fn pf_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let pb = BigUint::from(p);
    // t^(p^d) == t mod f
    let frob = pf_powmod_var(&pb.pow(d as u32), f, p);
    if pf_sub(&frob, &[0, 1], p) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_divisors(d) {
        let e = pb.pow((d / l) as u32);
        let h = pf_powmod_var(&e, f, p);
        let diff = pf_sub(&h, &[0, 1], p);
        let g = pf_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First monic irreducible polynomial of degree `d` over GF(p) in the
/// enumeration ordered by the base-p value of the non-leading coefficients.
pub fn find_irreducible(p: u64, d: usize) -> Vec<u64> {
    if d == 1 {
        return vec![0, 1];
    }
    let mut counter = vec![0u64; d];
    loop {
        let mut cand = counter.clone();
        cand.push(1);
        if pf_is_irreducible(&cand, p) {
            return cand;
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] < p {
                break;
            }
            counter[i] = 0;
            i += 1;
            assert!(i < d, "no irreducible polynomial found");
        }
    }
}

// ----- GF(p^d) element arithmetic on coefficient vectors -----

pub fn elt_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

pub fn elt_neg(a: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|x| (p - x) % p).collect()
}

pub fn elt_mul(a: &[u64], b: &[u64], p: u64, min_poly: &[u64]) -> Vec<u64> {
    let d = min_poly.len() - 1;
    if d == 1 {
        return vec![mul_mod(a[0], b[0], p)];
    }
    let mut prod = vec![0u64; 2 * d - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..d {
            let sub = mul_mod(c, min_poly[j], p);
            prod[i - d + j] = (prod[i - d + j] + p - sub) % p;
        }
    }
    prod.truncate(d);
    prod
}

pub fn elt_inv(a: &[u64], p: u64, min_poly: &[u64]) -> Result<Vec<u64>> {
    let d = min_poly.len() - 1;
    if a.iter().all(|&x| x == 0) {
        return Err(Error::DivisionByZero);
    }
    if d == 1 {
        return Ok(vec![inv_mod(a[0], p)?]);
    }
    // extended Euclid of a(t) against the defining polynomial
    let mut r0: Vec<u64> = min_poly.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    pf_trim(&mut r1);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // r0 = q*r1 + r
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let lead_inv = inv_mod(*r1.last().unwrap(), p)?;
        let mut r = r0.clone();
        while r.len() >= r1.len() && !r.is_empty() {
            let k = r.len() - r1.len();
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            q[k] = c;
            for (j, &mc) in r1.iter().enumerate() {
                let sub = mul_mod(c, mc, p);
                r[k + j] = (r[k + j] + p - sub) % p;
            }
            pf_trim(&mut r);
        }
        let qs1 = pf_mul(&q, &s1, p);
        let s = pf_sub(&s0, &qs1, p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return Err(Error::ReduciblePolynomial(
            "finite field defining polynomial is reducible".into(),
        ));
    }
    let lc_inv = inv_mod(r0[0], p)?;
    let mut out = vec![0u64; d];
    for (i, &c) in s0.iter().enumerate() {
        out[i] = mul_mod(c, lc_inv, p);
    }
    Ok(out)
}

// ----- generic machinery over a finite field descriptor -----

/// Element with index `idx` in the canonical enumeration of GF(p^d)
/// (coefficient vectors read as base-p digits, least significant first).
pub fn element_from_index(idx: u64, fq: &FieldDescriptor) -> FieldElement {
    match fq {
        FieldDescriptor::FiniteField { p, min_poly } => {
            let d = min_poly.len() - 1;
            let mut coords = vec![0u64; d];
            let mut v = idx;
            for c in coords.iter_mut() {
                *c = v % p;
                v /= p;
            }
            FieldElement::Fin(coords)
        }
        _ => panic!("element_from_index requires a finite field"),
    }
}

pub fn element_count_u64(fq: &FieldDescriptor) -> Option<u64> {
    let order = fq.finite_order()?;
    order.to_u64()
}

fn random_poly_below(deg: usize, fq: &FieldDescriptor, rng: &mut ChaCha8Rng) -> Polynomial {
    let (p, d) = match fq {
        FieldDescriptor::FiniteField { p, min_poly } => (*p, min_poly.len() - 1),
        _ => panic!("finite field required"),
    };
    let coeffs = (0..deg)
        .map(|_| {
            let coords: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
            FieldElement::Fin(coords)
        })
        .collect();
    Polynomial::new(coeffs, fq)
}

/// Irreducibility over GF(q) by the Frobenius criterion.
pub fn poly_is_irreducible(f: &Polynomial, fq: &FieldDescriptor) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let q = fq.finite_order().expect("finite field");
    let x = Polynomial::var(fq);
    let frob = x.pow_mod(&q.pow(n as u32), f, fq)?;
    if !frob.sub(&x, fq).is_zero() {
        return Ok(false);
    }
    for l in prime_divisors(n) {
        let h = x.pow_mod(&q.pow((n / l) as u32), f, fq)?;
        let g = h.sub(&x, fq).gcd(f, fq)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pth_root_elt(c: &FieldElement, fq: &FieldDescriptor) -> FieldElement {
    // In GF(p^d) the p-th root of c is c^(p^(d-1)).
    let (p, d) = match fq {
        FieldDescriptor::FiniteField { p, min_poly } => (*p, min_poly.len() - 1),
        _ => panic!("finite field required"),
    };
    if d == 1 {
        return c.clone();
    }
    let mut acc = c.clone();
    for _ in 0..d - 1 {
        let mut powed = fq.one();
        let mut base = acc.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                powed = fq.mul(&powed, &base);
            }
            e >>= 1;
            if e > 0 {
                base = fq.mul(&base, &base);
            }
        }
        acc = powed;
    }
    acc
}

fn pth_root_poly(f: &Polynomial, fq: &FieldDescriptor) -> Polynomial {
    let p = fq.characteristic() as usize;
    let mut coeffs = Vec::new();
    let d = f.degree().unwrap_or(0);
    let mut i = 0;
    while i <= d {
        coeffs.push(pth_root_elt(&f.coeff(i, fq), fq));
        i += p;
    }
    Polynomial::new(coeffs, fq)
}

/// Squarefree decomposition of a monic polynomial over GF(q): returns
/// pairwise-coprime monic squarefree parts with multiplicities.
fn squarefree_decomposition(
    f: &Polynomial,
    fq: &FieldDescriptor,
) -> Result<Vec<(Polynomial, usize)>> {
    let p = fq.characteristic() as usize;
    let mut out: Vec<(Polynomial, usize)> = Vec::new();
    let mut f = f.monic(fq)?;
    let mut e = 1usize;
    loop {
        let deriv = f.derivative(fq);
        if deriv.is_zero() {
            if f.degree() == Some(0) {
                break;
            }
            f = pth_root_poly(&f, fq);
            e *= p;
            continue;
        }
        let mut g = f.gcd(&deriv, fq)?;
        let mut w = f.div_exact(&g, fq)?;
        let mut i = 1usize;
        while !w.is_one(fq) {
            let y = w.gcd(&g, fq)?;
            let z = w.div_exact(&y, fq)?;
            if !z.is_one(fq) {
                out.push((z, i * e));
            }
            w = y;
            g = g.div_exact(&w, fq)?;
            i += 1;
        }
        if g.degree() == Some(0) {
            break;
        }
        f = pth_root_poly(&g, fq);
        e *= p;
    }
    Ok(out)
}

/// Distinct-degree splitting of a monic squarefree polynomial: returns
/// (product of irreducible factors of degree d, d) pairs.
fn distinct_degree(f: &Polynomial, fq: &FieldDescriptor) -> Result<Vec<(Polynomial, usize)>> {
    let q = fq.finite_order().expect("finite field");
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = Polynomial::var(fq);
    let mut h = x.rem(&f, fq)?;
    let mut d = 0usize;
    while f.degree().map(|k| k >= 2 * (d + 1)).unwrap_or(false) {
        d += 1;
        h = h.pow_mod(&q, &f, fq)?;
        let g = h.sub(&x, fq).gcd(&f, fq)?;
        if g.degree() != Some(0) {
            out.push((g.clone(), d));
            f = f.div_exact(&g, fq)?;
            h = h.rem(&f, fq)?;
        }
    }
    if f.degree().map(|k| k > 0).unwrap_or(false) {
        let deg = f.degree().unwrap();
        out.push((f, deg));
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting: `f` is monic squarefree with
/// all irreducible factors of degree `d`.
fn equal_degree(
    f: &Polynomial,
    d: usize,
    fq: &FieldDescriptor,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Polynomial>> {
    let n = f.degree().unwrap();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let q = fq.finite_order().expect("finite field");
    let two = BigUint::from(2u32);
    loop {
        let h = random_poly_below(n, fq, rng);
        if h.degree().is_none() {
            continue;
        }
        let g = if (&q) % &two == BigUint::one() {
            // odd characteristic: h^((q^d-1)/2) - 1
            let e = (q.pow(d as u32) - BigUint::one()) / &two;
            let w = h.pow_mod(&e, f, fq)?;
            w.sub(&Polynomial::one(fq), fq).gcd(f, fq)?
        } else {
            // characteristic 2: trace map over GF(2^(k*d))
            let k = fq.finite_degree().unwrap();
            let mut tr = h.rem(f, fq)?;
            let mut pw = h.rem(f, fq)?;
            for _ in 1..(k * d) {
                pw = pw.mul(&pw, fq).rem(f, fq)?;
                tr = tr.add(&pw, fq);
            }
            tr.gcd(f, fq)?
        };
        let dg = g.degree().unwrap_or(0);
        if dg == 0 || dg == n {
            continue;
        }
        let rest = f.div_exact(&g, fq)?;
        let mut out = equal_degree(&g, d, fq, rng)?;
        out.extend(equal_degree(&rest, d, fq, rng)?);
        return Ok(out);
    }
}

/// Full factorization of a monic polynomial over a finite field. Factors are
/// monic irreducible, returned with multiplicities, ordered by degree and
/// then lexicographically on ascending coefficients.
pub fn factor(
    f: &Polynomial,
    fq: &Arc<FieldDescriptor>,
    seed: u64,
) -> Result<Vec<(Polynomial, usize)>> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Polynomial, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(f, fq)? {
        for (prod, d) in distinct_degree(&part, fq)? {
            for irr in equal_degree(&prod, d, fq, &mut rng)? {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0, fq));
    Ok(out)
}

/// Roots of `f` in GF(q), canonically ordered.
pub fn roots(f: &Polynomial, fq: &Arc<FieldDescriptor>, seed: u64) -> Result<Vec<FieldElement>> {
    if f.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let q = fq.finite_order().expect("finite field");
    let f = f.monic(fq)?;
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x = Polynomial::var(fq);
    let frob = x.pow_mod(&q, &f, fq)?;
    let lin = frob.sub(&x, fq).gcd(&f, fq)?;
    if lin.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let mut out = Vec::new();
    for factor in equal_degree(&lin, 1, fq, &mut rng)? {
        // factor = t + c, root = -c
        let c = factor.coeff(0, fq);
        out.push(fq.neg(&c));
    }
    out.sort_by(|a, b| fq.cmp_elements(a, b));
    Ok(out)
}

/// Reduce a monic integer polynomial mod p and factor it over GF(p).
/// Returns irreducible factors with multiplicity expanded, each as an
/// ascending coefficient vector, deterministically ordered.
pub fn factor_mod_p(f: &[BigInt], p: u64, seed: u64) -> Result<Vec<Vec<u64>>> {
    if f.last().map(|c| !c.is_one()).unwrap_or(true) {
        return Err(Error::NotMonic);
    }
    check_p(p)?;
    let fq = FieldDescriptor::prime_field(p)?;
    let coeffs = f
        .iter()
        .map(|c| FieldElement::Fin(vec![bigint_mod_p(c, p)]))
        .collect();
    let poly = Polynomial::new(coeffs, &fq);
    let mut out = Vec::new();
    for (factor, mult) in factor(&poly, &fq, seed)? {
        let vec: Vec<u64> = factor
            .coeffs()
            .iter()
            .map(|c| match c {
                FieldElement::Fin(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        for _ in 0..mult {
            out.push(vec.clone());
        }
    }
    Ok(out)
}

fn check_p(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{} is not prime", p)));
    }
    Ok(())
}

/// Image of the generator of the subfield GF(p^a) defined by `sub_min_poly`
/// inside the bigger field `sup` (an extension with a | [sup : GF(p)]):
/// the canonically first root of the subfield's defining polynomial.
pub fn embedding_root(
    sub_min_poly: &[u64],
    sup: &Arc<FieldDescriptor>,
    seed: u64,
) -> Result<FieldElement> {
    let coeffs = sub_min_poly
        .iter()
        .map(|&c| sup.from_i64(c as i64))
        .collect::<Vec<_>>();
    let lifted = Polynomial::new(coeffs, sup);
    let rs = roots(&lifted, sup, seed)?;
    rs.into_iter().next().ok_or_else(|| {
        Error::Internal("defining polynomial has no root in the chosen extension".into())
    })
}

/// Maps coordinates over GF(p^a) through the embedding sending the subfield
/// generator to `root`.
pub fn embed_coords(coords: &[u64], root: &FieldElement, sup: &FieldDescriptor) -> FieldElement {
    let mut acc = sup.zero();
    for &c in coords.iter().rev() {
        acc = sup.mul(&acc, root);
        let scalar = sup.from_i64(c as i64);
        acc = sup.add(&acc, &scalar);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Arc<FieldDescriptor> {
        FieldDescriptor::prime_field(p).unwrap()
    }

    fn poly_from(coeffs: &[i64], fq: &Arc<FieldDescriptor>) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|&c| fq.from_i64(c)).collect(), fq)
    }

    /// Exhaustive root search, used as the independent oracle for small
    /// factorizations.
    fn brute_roots(f: &Polynomial, fq: &Arc<FieldDescriptor>) -> Vec<u64> {
        let count = element_count_u64(fq).unwrap();
        let mut out = Vec::new();
        for i in 0..count {
            let e = element_from_index(i, fq);
            if fq.is_zero(&f.eval(&e, fq)) {
                out.push(i);
            }
        }
        out
    }

    #[test]
    fn factor_t2_minus_1_mod_5() {
        let f = vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)];
        let factors = factor_mod_p(&f, 5, 0).unwrap();
        assert_eq!(factors, vec![vec![1, 1], vec![4, 1]]);
    }

    #[test]
    fn factor_t2_plus_1_mod_5_matches_root_oracle() {
        let fq = gf(5);
        let poly = poly_from(&[1, 0, 1], &fq);
        let roots = brute_roots(&poly, &fq);
        assert_eq!(roots, vec![2, 3], "2^2 = 3^2 = -1 mod 5");
        let f = vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        let factors = factor_mod_p(&f, 5, 0).unwrap();
        // t + 3 has root 2, t + 2 has root 3
        assert_eq!(factors, vec![vec![2, 1], vec![3, 1]]);
    }

    #[test]
    fn t2_plus_1_is_irreducible_mod_3() {
        let fq = gf(3);
        let poly = poly_from(&[1, 0, 1], &fq);
        assert!(brute_roots(&poly, &fq).is_empty());
        let f = vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        let factors = factor_mod_p(&f, 3, 0).unwrap();
        assert_eq!(factors, vec![vec![1, 0, 1]]);
    }

    #[test]
    fn factor_product_reproduces_input() {
        let fq = gf(7);
        let cases: Vec<Vec<i64>> = vec![
            vec![3, 1, 4, 1, 5, 9, 2, 1],
            vec![0, 0, 1, 1],
            vec![6, 0, 0, 0, 0, 1],
            vec![1, 2, 1],
        ];
        for coeffs in cases {
            let f = poly_from(&coeffs, &fq);
            let factors = factor(&f, &fq, 42).unwrap();
            let mut prod = Polynomial::one(&fq);
            for (g, m) in &factors {
                assert!(poly_is_irreducible(g, &fq).unwrap(), "factor must be irreducible");
                for _ in 0..*m {
                    prod = prod.mul(g, &fq);
                }
            }
            assert_eq!(prod, f.monic(&fq).unwrap(), "product check for {:?}", coeffs);
        }
    }

    #[test]
    fn factor_over_extension_field() {
        // over GF(9), t^2 + 1 splits since -1 is a square there
        let fq = FieldDescriptor::finite_field_with_poly(3, vec![1, 0, 1]).unwrap();
        let poly = poly_from(&[1, 0, 1], &fq);
        let factors = factor(&poly, &fq, 1).unwrap();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
        let rs = roots(&poly, &fq, 1).unwrap();
        assert_eq!(rs.len(), 2);
        for r in rs {
            let sq = fq.mul(&r, &r);
            assert_eq!(sq, fq.from_i64(-1));
        }
    }

    #[test]
    fn char_2_factorization() {
        let fq = gf(2);
        // t^2 + t + 1 is the unique irreducible quadratic over GF(2)
        let poly = poly_from(&[1, 1, 1], &fq);
        assert!(poly_is_irreducible(&poly, &fq).unwrap());
        // t^2 + 1 = (t + 1)^2 over GF(2)
        let sq = poly_from(&[1, 0, 1], &fq);
        let factors = factor(&sq, &fq, 3).unwrap();
        assert_eq!(factors, vec![(poly_from(&[1, 1], &fq), 2)]);
    }

    #[test]
    fn deterministic_irreducible_generation() {
        for (p, d) in [(2u64, 4usize), (3, 3), (5, 2), (19, 2)] {
            let f = find_irreducible(p, d);
            assert_eq!(f.len(), d + 1);
            assert!(pf_is_irreducible(&f, p));
            assert_eq!(f, find_irreducible(p, d), "deterministic");
        }
    }

    #[test]
    fn embedding_into_extension() {
        // GF(9) defined by t^2 + 1 embeds into GF(81)
        let gf81 = FieldDescriptor::finite_field(3, 4).unwrap();
        let root = embedding_root(&[1, 0, 1], &gf81, 0).unwrap();
        let sq = gf81.mul(&root, &root);
        assert_eq!(sq, gf81.from_i64(-1));
        // coordinates (1, 2) over GF(9), i.e. 1 + 2t, map through the root
        let image = embed_coords(&[1, 2], &root, &gf81);
        let two_r = gf81.mul(&gf81.from_i64(2), &root);
        assert_eq!(image, gf81.add(&gf81.one(), &two_r));
    }

    #[test]
    fn primality_check() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(19));
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }
}
