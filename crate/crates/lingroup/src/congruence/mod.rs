//! Congruence homomorphisms with finite image and verified admissibility.
//!
//! For each supported source field a map onto GL(n, q) is assembled from
//! up to three stages: substitution of the function-field variable at a
//! point alpha, reduction of base-field coordinates modulo an odd prime,
//! and evaluation at a root of the (substituted, reduced) extension
//! minimal polynomial. The admissibility conditions checked during
//! construction are recorded in a certificate that can be re-verified.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{finite, intpoly, parse, FieldDescriptor, FieldElement, Polynomial};
use crate::matrix::Matrix;

pub mod point;
pub mod prime;
pub mod ring;

pub use point::{select_point, SelectedPoint};
pub use prime::select_prime;
pub use ring::{clear_denominators, MuDatum, RingInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiVariant {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
}

impl PsiVariant {
    pub fn name(&self) -> &'static str {
        match self {
            PsiVariant::Psi1 => "psi1",
            PsiVariant::Psi2 => "psi2",
            PsiVariant::Psi3 => "psi3",
            PsiVariant::Psi4 => "psi4",
        }
    }
}

/// How elements of the coefficient field (after any substitution) reach the
/// finite target field.
#[derive(Debug, Clone)]
enum InnerMap {
    /// Rationals reduce modulo p.
    Rationals,
    /// Number-field coordinates reduce modulo p and are evaluated at the
    /// image of the field generator inside the target.
    NumberField { gen_image: FieldElement },
    /// Finite point-field elements embed through the image of the point
    /// field's generator; None means the target is the point field itself.
    Finite { gen_image: Option<FieldElement> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clause {
    /// Odd-prime maximal-ideal reduction over a Dedekind domain of
    /// characteristic zero.
    DedekindOddPrime,
    /// Residue (or ground) characteristic exceeds the dimension.
    CharPGreaterN,
    /// Small characteristic, validated because every kernel normal
    /// generator is unipotent.
    SmallCharUnipotentKernel,
    /// Small characteristic, validated because every kernel normal
    /// generator is diagonalizable.
    SmallCharDiagonalizableKernel,
    /// Small characteristic, not yet validated against the kernel.
    Provisional,
}

impl Clause {
    pub fn name(&self) -> &'static str {
        match self {
            Clause::DedekindOddPrime => "dedekind-odd-prime",
            Clause::CharPGreaterN => "char-p-greater-n",
            Clause::SmallCharUnipotentKernel => "small-char-unipotent-kernel",
            Clause::SmallCharDiagonalizableKernel => "small-char-diagonalizable-kernel",
            Clause::Provisional => "provisional",
        }
    }
}

#[derive(Debug, Clone)]
pub enum CheckedFact {
    PIsOdd { p: u64 },
    PNotDividesMu { p: u64, mu: BigInt },
    PNotDividesDisc { p: u64, disc: BigInt },
    CyclotomicConductorCoprime { p: u64, conductor: u64 },
    PGreaterN { p: u64, n: usize },
    PointNotRootOfMu { mu_at_alpha: String },
    DedekindViaComposition,
    FactorChosen { poly: String },
}

impl CheckedFact {
    pub fn recheck(&self) -> bool {
        match self {
            CheckedFact::PIsOdd { p } => *p % 2 == 1 && finite::is_prime_u64(*p),
            CheckedFact::PNotDividesMu { p, mu } => !prime::divides(*p, mu),
            CheckedFact::PNotDividesDisc { p, disc } => !prime::divides(*p, disc),
            CheckedFact::CyclotomicConductorCoprime { p, conductor } => conductor % p != 0,
            CheckedFact::PGreaterN { p, n } => *p > *n as u64,
            CheckedFact::PointNotRootOfMu { mu_at_alpha } => mu_at_alpha != "0",
            CheckedFact::DedekindViaComposition => true,
            CheckedFact::FactorChosen { .. } => true,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CheckedFact::PIsOdd { p } => format!("p = {} is an odd prime", p),
            CheckedFact::PNotDividesMu { p, mu } => format!("{} does not divide mu = {}", p, mu),
            CheckedFact::PNotDividesDisc { p, disc } => {
                format!("{} does not divide disc = {}", p, disc)
            }
            CheckedFact::CyclotomicConductorCoprime { p, conductor } => {
                format!("{} does not divide the cyclotomic conductor {}", p, conductor)
            }
            CheckedFact::PGreaterN { p, n } => format!("p = {} exceeds n = {}", p, n),
            CheckedFact::PointNotRootOfMu { mu_at_alpha } => {
                format!("mu(alpha) = {} is non-zero", mu_at_alpha)
            }
            CheckedFact::DedekindViaComposition => {
                "kernel factors through a maximal-ideal reduction of a Dedekind domain".into()
            }
            CheckedFact::FactorChosen { poly } => format!("chosen irreducible factor {}", poly),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdmissibilityCertificate {
    pub clause: Clause,
    pub checks: Vec<CheckedFact>,
}

impl AdmissibilityCertificate {
    /// Re-runs every stored check.
    pub fn recheck(&self) -> bool {
        self.checks.iter().all(|c| c.recheck())
    }
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub prime: Option<u64>,
    pub point: Option<String>,
    /// Additionally require p > n for the plain reduction maps.
    pub force_p_gt_n: bool,
    pub seed: u64,
    /// Permit construction in characteristic p <= n; the caller must then
    /// validate the kernel conditions before trusting verdicts.
    pub allow_small_char: bool,
}

/// A congruence homomorphism GL(n, R) -> GL(n, q) with its admissibility
/// certificate. Immutable after construction; application is pure.
#[derive(Debug, Clone)]
pub struct WHomomorphism {
    pub variant: PsiVariant,
    pub source: Arc<FieldDescriptor>,
    pub target: Arc<FieldDescriptor>,
    pub prime: u64,
    point: Option<SelectedPoint>,
    inner: InnerMap,
    beta_image: Option<FieldElement>,
    pub certificate: AdmissibilityCertificate,
    /// All maps built here are SW-homomorphisms: torsion elements of the
    /// congruence kernel are unipotent.
    pub sw: bool,
    pub mu_display: String,
    pub point_display: Option<String>,
    pub factor_display: Option<String>,
    pub ftilde_display: Option<String>,
}

impl WHomomorphism {
    pub fn apply(&self, m: &Matrix) -> Result<Matrix> {
        if m.field() != &self.source {
            return Err(Error::DescriptorMismatch(format!(
                "matrix over {} fed to a map on {}",
                m.field(),
                self.source
            )));
        }
        let n = m.n();
        let mut entries = Vec::with_capacity(n * n);
        for e in m.entries() {
            entries.push(self.apply_element(e)?);
        }
        Matrix::from_entries(n, entries, self.target.clone())
    }

    fn apply_element(&self, e: &FieldElement) -> Result<FieldElement> {
        match self.variant {
            PsiVariant::Psi1 | PsiVariant::Psi2 => self.apply_inner(e),
            PsiVariant::Psi3 => {
                let (num, den) = match e {
                    FieldElement::RatFunc { num, den } => (num, den),
                    _ => return Err(Error::DescriptorMismatch("expected a rational function".into())),
                };
                let point = self.point.as_ref().expect("substitution stage present");
                let dv = point.eval(den);
                if point.field.is_zero(&dv) {
                    return Err(Error::CertificateViolation(
                        "entry denominator vanishes at the substitution point".into(),
                    ));
                }
                let nv = point.eval(num);
                let c = point.field.div(&nv, &dv)?;
                self.apply_inner(&c)
            }
            PsiVariant::Psi4 => {
                let coords = match e {
                    FieldElement::AlgFunc(coords) => coords,
                    _ => {
                        return Err(Error::DescriptorMismatch(
                            "expected an algebraic function field element".into(),
                        ))
                    }
                };
                let point = self.point.as_ref().expect("substitution stage present");
                let beta = self.beta_image.as_ref().expect("beta image present");
                let f = &self.target;
                let mut acc = f.zero();
                for c in coords.iter().rev() {
                    let (num, den) = match c {
                        FieldElement::RatFunc { num, den } => (num, den),
                        _ => unreachable!("algebraic function field coordinates"),
                    };
                    let dv = point.eval(den);
                    if point.field.is_zero(&dv) {
                        return Err(Error::CertificateViolation(
                            "coordinate denominator vanishes at the substitution point".into(),
                        ));
                    }
                    let value = point.field.div(&point.eval(num), &dv)?;
                    let mapped = self.apply_inner(&value)?;
                    acc = f.mul(&acc, beta);
                    acc = f.add(&acc, &mapped);
                }
                Ok(acc)
            }
        }
    }

    /// Maps a coefficient-field element (rationals, number field, or the
    /// finite point field) into the target.
    fn apply_inner(&self, c: &FieldElement) -> Result<FieldElement> {
        match (&self.inner, c) {
            (InnerMap::Rationals, FieldElement::Rat(r)) => self.reduce_rational(r),
            (InnerMap::NumberField { gen_image }, FieldElement::NumField(coords)) => {
                let f = &self.target;
                let mut acc = f.zero();
                for r in coords.iter().rev() {
                    acc = f.mul(&acc, gen_image);
                    let red = self.reduce_rational(r)?;
                    acc = f.add(&acc, &red);
                }
                Ok(acc)
            }
            (InnerMap::Finite { gen_image: None }, fin @ FieldElement::Fin(_)) => Ok(fin.clone()),
            (InnerMap::Finite { gen_image: Some(root) }, FieldElement::Fin(coords)) => {
                Ok(finite::embed_coords(coords, root, &self.target))
            }
            _ => Err(Error::DescriptorMismatch(
                "element does not match the coefficient stage of the map".into(),
            )),
        }
    }

    fn reduce_rational(&self, r: &BigRational) -> Result<FieldElement> {
        let p = self.prime;
        let den = finite::bigint_mod_p(r.denom(), p);
        if den == 0 {
            return Err(Error::CertificateViolation(format!(
                "denominator of {} reduces to zero mod {}",
                r, p
            )));
        }
        let num = finite::bigint_mod_p(r.numer(), p);
        let value = finite::mul_mod(num, finite::inv_mod(den, p)?, p);
        Ok(self.target.from_i64(value as i64))
    }
}

/// Builds the congruence map for the source field of `gens`, choosing the
/// smallest admissible prime and the first admissible substitution point
/// unless overridden. The returned map has been spot-checked for
/// multiplicativity on sampled generator pairs.
pub fn build_whom(gens: &[Matrix], opts: &BuildOptions) -> Result<WHomomorphism> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("empty generating set".into()));
    }
    let field = gens[0].field().clone();
    let n = gens[0].n();
    let ring_info = clear_denominators(gens)?;
    let mut all = Vec::with_capacity(2 * gens.len());
    for g in gens {
        all.push(g.clone());
        all.push(g.inverse()?);
    }

    let whom = match &*field {
        FieldDescriptor::Rationals => build_psi1(&field, n, &ring_info, opts)?,
        FieldDescriptor::NumberField { .. } => build_psi2(&field, n, &ring_info, opts)?,
        FieldDescriptor::FunctionField { .. } => build_psi3(&field, n, &ring_info, &all, opts)?,
        FieldDescriptor::AlgFunctionField { .. } => {
            build_psi4(&field, n, &ring_info, &all, opts)?
        }
        FieldDescriptor::FiniteField { .. } => {
            return Err(Error::InvalidInput(
                "the source field must be infinite; finite fields need no congruence map".into(),
            ))
        }
    };

    spot_check(&whom, &all, opts.seed)?;
    Ok(whom)
}

fn validate_prime_override(
    p: u64,
    mu: &BigInt,
    n: usize,
    need_gt_n: bool,
    extra: &dyn Fn(u64) -> Option<String>,
) -> Result<()> {
    if !finite::is_prime_u64(p) || p == 2 {
        return Err(Error::InvalidInput(format!("{} is not an odd prime", p)));
    }
    if prime::divides(p, mu) {
        return Err(Error::InvalidInput(format!("{} divides mu = {}", p, mu)));
    }
    if need_gt_n && p <= n as u64 {
        return Err(Error::InvalidInput(format!(
            "prime {} must exceed the dimension {}",
            p, n
        )));
    }
    if let Some(why) = extra(p) {
        return Err(Error::InvalidInput(format!("prime {} is inadmissible: {}", p, why)));
    }
    Ok(())
}

/// Smallest odd prime coprime to mu passing `extra`, or the validated
/// override.
fn choose_prime(
    mu: &BigInt,
    n: usize,
    need_gt_n: bool,
    extra: &dyn Fn(u64) -> Option<String>,
    override_p: Option<u64>,
) -> Result<u64> {
    if let Some(p) = override_p {
        validate_prime_override(p, mu, n, need_gt_n, extra)?;
        return Ok(p);
    }
    let mut forbidden: BTreeSet<u64> = BTreeSet::new();
    loop {
        let p = select_prime(mu, n, need_gt_n, &forbidden);
        if extra(p).is_none() {
            return Ok(p);
        }
        forbidden.insert(p);
    }
}

fn build_psi1(
    field: &Arc<FieldDescriptor>,
    n: usize,
    ring_info: &RingInfo,
    opts: &BuildOptions,
) -> Result<WHomomorphism> {
    let mu = match &ring_info.mu {
        MuDatum::Int(v) => v.clone(),
        _ => unreachable!("rational source has integer mu"),
    };
    let p = choose_prime(&mu, n, opts.force_p_gt_n, &|_| None, opts.prime)?;
    let mut checks = vec![
        CheckedFact::PIsOdd { p },
        CheckedFact::PNotDividesMu { p, mu: mu.clone() },
    ];
    if opts.force_p_gt_n {
        checks.push(CheckedFact::PGreaterN { p, n });
    }
    Ok(WHomomorphism {
        variant: PsiVariant::Psi1,
        source: field.clone(),
        target: FieldDescriptor::prime_field(p)?,
        prime: p,
        point: None,
        inner: InnerMap::Rationals,
        beta_image: None,
        certificate: AdmissibilityCertificate {
            clause: Clause::DedekindOddPrime,
            checks,
        },
        sw: true,
        mu_display: mu.to_string(),
        point_display: None,
        factor_display: None,
        ftilde_display: None,
    })
}

fn build_psi2(
    field: &Arc<FieldDescriptor>,
    n: usize,
    ring_info: &RingInfo,
    opts: &BuildOptions,
) -> Result<WHomomorphism> {
    let min_poly = match &**field {
        FieldDescriptor::NumberField { min_poly } => min_poly.clone(),
        _ => unreachable!(),
    };
    let mu = match &ring_info.mu {
        MuDatum::Int(v) => v.clone(),
        _ => unreachable!("number-field source has integer mu"),
    };
    // the cyclotomic shortcut replaces the discriminant condition
    let conductor = intpoly::as_cyclotomic(&min_poly);
    let disc = intpoly::discriminant(&min_poly)?;
    let extra = |p: u64| -> Option<String> {
        match conductor {
            Some(c) => {
                if c as u64 % p == 0 {
                    Some(format!("p divides the cyclotomic conductor {}", c))
                } else {
                    None
                }
            }
            None => {
                if prime::divides(p, &disc) {
                    Some(format!("p divides the discriminant {}", disc))
                } else {
                    None
                }
            }
        }
    };
    let p = choose_prime(&mu, n, opts.force_p_gt_n, &extra, opts.prime)?;
    let factors = finite::factor_mod_p(&min_poly, p, opts.seed)?;
    let factor = factors[0].clone();
    let (target, gen_image) = target_from_prime_factor(p, &factor)?;
    let factor_display = pf_display(&factor);
    let mut checks = vec![
        CheckedFact::PIsOdd { p },
        CheckedFact::PNotDividesMu { p, mu: mu.clone() },
    ];
    match conductor {
        Some(c) => checks.push(CheckedFact::CyclotomicConductorCoprime {
            p,
            conductor: c as u64,
        }),
        None => checks.push(CheckedFact::PNotDividesDisc { p, disc }),
    }
    if opts.force_p_gt_n {
        checks.push(CheckedFact::PGreaterN { p, n });
    }
    checks.push(CheckedFact::FactorChosen {
        poly: factor_display.clone(),
    });
    Ok(WHomomorphism {
        variant: PsiVariant::Psi2,
        source: field.clone(),
        target,
        prime: p,
        point: None,
        inner: InnerMap::NumberField { gen_image },
        beta_image: None,
        certificate: AdmissibilityCertificate {
            clause: Clause::DedekindOddPrime,
            checks,
        },
        sw: true,
        mu_display: mu.to_string(),
        point_display: None,
        factor_display: Some(factor_display),
        ftilde_display: None,
    })
}

/// Target field GF(p)[t]/(factor) with the image of the reduced generator.
/// Degree-one factors normalize to the standard prime field.
fn target_from_prime_factor(
    p: u64,
    factor: &[u64],
) -> Result<(Arc<FieldDescriptor>, FieldElement)> {
    if factor.len() == 2 {
        let target = FieldDescriptor::prime_field(p)?;
        let image = target.from_i64(-(factor[0] as i64));
        Ok((target, image))
    } else {
        let target = FieldDescriptor::finite_field_with_poly(p, factor.to_vec())?;
        let image = target.generator().expect("degree >= 2");
        Ok((target, image))
    }
}

fn pf_display(poly: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in poly.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let body = match i {
            0 => c.to_string(),
            1 if c == 1 => "t".into(),
            1 => format!("{}*t", c),
            _ if c == 1 => format!("t^{}", i),
            _ => format!("{}*t^{}", c, i),
        };
        parts.push(body);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn resolve_point(
    mu_poly: &Polynomial,
    base: &Arc<FieldDescriptor>,
    opts: &BuildOptions,
) -> Result<(SelectedPoint, String)> {
    let point = match &opts.point {
        Some(s) => {
            let alpha = parse::parse_element(s, base)?;
            let sp = SelectedPoint {
                field: base.clone(),
                alpha,
                base_gen_image: None,
            };
            if base.is_zero(&sp.eval(mu_poly)) {
                return Err(Error::InvalidInput(format!(
                    "substitution point {} is a root of mu",
                    s
                )));
            }
            sp
        }
        None => select_point(mu_poly, base, opts.seed)?,
    };
    let display = point.field.format(&point.alpha);
    Ok((point, display))
}

/// Collects the integer denominator lcm of rational or number-field values.
fn collect_denominators(values: &[FieldElement], acc: &mut BigInt) {
    for v in values {
        match v {
            FieldElement::Rat(r) => *acc = acc.lcm(r.denom()),
            FieldElement::NumField(coords) => {
                for r in coords {
                    *acc = acc.lcm(r.denom());
                }
            }
            _ => {}
        }
    }
}

fn build_psi3(
    field: &Arc<FieldDescriptor>,
    n: usize,
    ring_info: &RingInfo,
    all: &[Matrix],
    opts: &BuildOptions,
) -> Result<WHomomorphism> {
    let base = field.base().expect("function field").clone();
    let mu_poly = match &ring_info.mu {
        MuDatum::Poly(p) => p.clone(),
        _ => unreachable!(),
    };
    let (point, point_display) = resolve_point(&mu_poly, &base, opts)?;
    let mu_at_alpha = point.field.format(&point.eval(&mu_poly));
    let mu_display = mu_poly.format(field.var().unwrap_or("x"), &base);

    if base.characteristic() == 0 {
        // substitute, then reduce: collect the integer denominators of the
        // substituted entries and pick p > n coprime to them
        let mut substituted = Vec::new();
        for m in all {
            for e in m.entries() {
                if let FieldElement::RatFunc { num, den } = e {
                    let dv = point.eval(den);
                    let value = point.field.div(&point.eval(num), &dv)?;
                    substituted.push(value);
                }
            }
        }
        let mut mu2 = BigInt::one();
        collect_denominators(&substituted, &mut mu2);

        let inner_src = base.clone();
        let (p, inner, target, mut checks, factor_display) = match &*inner_src {
            FieldDescriptor::Rationals => {
                let p = choose_prime(&mu2, n, true, &|_| None, opts.prime)?;
                let target = FieldDescriptor::prime_field(p)?;
                (p, InnerMap::Rationals, target, Vec::new(), None)
            }
            FieldDescriptor::NumberField { min_poly } => {
                let conductor = intpoly::as_cyclotomic(min_poly);
                let disc = intpoly::discriminant(min_poly)?;
                let extra = |p: u64| -> Option<String> {
                    match conductor {
                        Some(c) => {
                            if c as u64 % p == 0 {
                                Some(format!("p divides the cyclotomic conductor {}", c))
                            } else {
                                None
                            }
                        }
                        None => {
                            if prime::divides(p, &disc) {
                                Some(format!("p divides the discriminant {}", disc))
                            } else {
                                None
                            }
                        }
                    }
                };
                let p = choose_prime(&mu2, n, true, &extra, opts.prime)?;
                let factors = finite::factor_mod_p(min_poly, p, opts.seed)?;
                let factor = factors[0].clone();
                let (target, gen_image) = target_from_prime_factor(p, &factor)?;
                let mut extra_checks = Vec::new();
                match conductor {
                    Some(c) => extra_checks.push(CheckedFact::CyclotomicConductorCoprime {
                        p,
                        conductor: c as u64,
                    }),
                    None => extra_checks.push(CheckedFact::PNotDividesDisc { p, disc }),
                }
                (
                    p,
                    InnerMap::NumberField { gen_image },
                    target,
                    extra_checks,
                    Some(pf_display(&factor)),
                )
            }
            _ => unreachable!("characteristic zero bases"),
        };
        let mut all_checks = vec![
            CheckedFact::PIsOdd { p },
            CheckedFact::PGreaterN { p, n },
            CheckedFact::PNotDividesMu { p, mu: mu2 },
            CheckedFact::PointNotRootOfMu { mu_at_alpha },
            CheckedFact::DedekindViaComposition,
        ];
        all_checks.append(&mut checks);
        if let Some(f) = &factor_display {
            all_checks.push(CheckedFact::FactorChosen { poly: f.clone() });
        }
        Ok(WHomomorphism {
            variant: PsiVariant::Psi3,
            source: field.clone(),
            target,
            prime: p,
            point: Some(point),
            inner,
            beta_image: None,
            certificate: AdmissibilityCertificate {
                clause: Clause::CharPGreaterN,
                checks: all_checks,
            },
            sw: true,
            mu_display,
            point_display: Some(point_display),
            factor_display,
            ftilde_display: None,
        })
    } else {
        let p = base.characteristic();
        if let Some(q) = opts.prime {
            if q != p {
                return Err(Error::InvalidInput(format!(
                    "the characteristic fixes the prime to {}; cannot use {}",
                    p, q
                )));
            }
        }
        let clause = small_char_clause(p, n, opts)?;
        let mut checks = vec![CheckedFact::PointNotRootOfMu { mu_at_alpha }];
        if p > n as u64 {
            checks.push(CheckedFact::PGreaterN { p, n });
        }
        Ok(WHomomorphism {
            variant: PsiVariant::Psi3,
            source: field.clone(),
            target: point.field.clone(),
            prime: p,
            point: Some(point),
            inner: InnerMap::Finite { gen_image: None },
            beta_image: None,
            certificate: AdmissibilityCertificate { clause, checks },
            sw: true,
            mu_display,
            point_display: Some(point_display),
            factor_display: None,
            ftilde_display: None,
        })
    }
}

fn small_char_clause(p: u64, n: usize, opts: &BuildOptions) -> Result<Clause> {
    if p > n as u64 {
        Ok(Clause::CharPGreaterN)
    } else if opts.allow_small_char {
        Ok(Clause::Provisional)
    } else {
        Err(Error::WHomUnavailable(format!(
            "characteristic {} does not exceed the dimension {}; the kernel \
             conditions for small characteristic must be verified",
            p, n
        )))
    }
}

fn build_psi4(
    field: &Arc<FieldDescriptor>,
    n: usize,
    ring_info: &RingInfo,
    all: &[Matrix],
    opts: &BuildOptions,
) -> Result<WHomomorphism> {
    let (ff_base, ext_min_poly, ext_var) = match &**field {
        FieldDescriptor::AlgFunctionField { base, min_poly, var } => {
            (base.clone(), min_poly.clone(), var.clone())
        }
        _ => unreachable!(),
    };
    let base = ff_base.base().expect("function field").clone();
    let mu_poly = match &ring_info.mu {
        MuDatum::Poly(p) => p.clone(),
        _ => unreachable!(),
    };
    let (point, point_display) = resolve_point(&mu_poly, &base, opts)?;
    let mu_at_alpha = point.field.format(&point.eval(&mu_poly));
    let mu_display = mu_poly.format(ff_base.var().unwrap_or("x"), &base);

    // substitute alpha into the extension minimal polynomial
    let ftilde: Vec<FieldElement> = ext_min_poly.iter().map(|c| point.eval(c)).collect();
    let pf = &point.field;
    let ftilde_display = Polynomial::new(ftilde.clone(), pf).format(&ext_var, pf);

    if base.characteristic() == 0 {
        // denominators of all substituted coordinates and of ftilde
        let mut d = BigInt::one();
        collect_denominators(&ftilde, &mut d);
        let mut substituted = Vec::new();
        for m in all {
            for e in m.entries() {
                if let FieldElement::AlgFunc(coords) = e {
                    for c in coords {
                        if let FieldElement::RatFunc { num, den } = c {
                            let dv = point.eval(den);
                            let value = point.field.div(&point.eval(num), &dv)?;
                            substituted.push(value);
                        }
                    }
                }
            }
        }
        collect_denominators(&substituted, &mut d);

        match &*base {
            FieldDescriptor::Rationals => {
                let p = choose_prime(&d, n, true, &|_| None, opts.prime)?;
                // reduce ftilde mod p and factor over GF(p)
                let fhat: Vec<BigInt> = ftilde
                    .iter()
                    .map(|c| match c {
                        FieldElement::Rat(r) => {
                            let den = finite::bigint_mod_p(r.denom(), p);
                            let num = finite::bigint_mod_p(r.numer(), p);
                            BigInt::from(finite::mul_mod(
                                num,
                                finite::inv_mod(den, p).expect("p coprime to denominators"),
                                p,
                            ))
                        }
                        _ => unreachable!(),
                    })
                    .collect();
                let factors = finite::factor_mod_p(&fhat, p, opts.seed)?;
                let factor = factors[0].clone();
                let (target, beta_image) = target_from_prime_factor(p, &factor)?;
                let factor_display = pf_display(&factor);
                let checks = vec![
                    CheckedFact::PIsOdd { p },
                    CheckedFact::PGreaterN { p, n },
                    CheckedFact::PNotDividesMu { p, mu: d },
                    CheckedFact::PointNotRootOfMu { mu_at_alpha },
                    CheckedFact::FactorChosen {
                        poly: factor_display.clone(),
                    },
                ];
                Ok(WHomomorphism {
                    variant: PsiVariant::Psi4,
                    source: field.clone(),
                    target,
                    prime: p,
                    point: Some(point),
                    inner: InnerMap::Rationals,
                    beta_image: Some(beta_image),
                    certificate: AdmissibilityCertificate {
                        clause: Clause::CharPGreaterN,
                        checks,
                    },
                    sw: true,
                    mu_display,
                    point_display: Some(point_display),
                    factor_display: Some(factor_display),
                    ftilde_display: Some(ftilde_display),
                })
            }
            FieldDescriptor::NumberField { min_poly } => {
                let p = choose_prime(&d, n, true, &|_| None, opts.prime)?;
                // reduce the base generator first
                let hfactors = finite::factor_mod_p(min_poly, p, opts.seed)?;
                let hfactor = hfactors[0].clone();
                let (subfield, gamma_sub) = target_from_prime_factor(p, &hfactor)?;
                // map ftilde into the subfield
                let reduce = |r: &BigRational| -> u64 {
                    let den = finite::bigint_mod_p(r.denom(), p);
                    let num = finite::bigint_mod_p(r.numer(), p);
                    finite::mul_mod(num, finite::inv_mod(den, p).expect("admissible p"), p)
                };
                let fhat_coeffs: Vec<FieldElement> = ftilde
                    .iter()
                    .map(|c| match c {
                        FieldElement::NumField(coords) => {
                            let mut acc = subfield.zero();
                            for r in coords.iter().rev() {
                                acc = subfield.mul(&acc, &gamma_sub);
                                let s = subfield.from_i64(reduce(r) as i64);
                                acc = subfield.add(&acc, &s);
                            }
                            acc
                        }
                        FieldElement::Rat(r) => subfield.from_i64(reduce(r) as i64),
                        _ => unreachable!(),
                    })
                    .collect();
                let fhat = Polynomial::new(fhat_coeffs, &subfield);
                let gfactors = finite::factor(&fhat, &subfield, opts.seed)?;
                let gfactor = gfactors[0].0.clone();
                let b = gfactor.degree().unwrap();
                let factor_display =
                    gfactor.format(&ext_var, &subfield);
                let a = subfield.extension_degree();
                let (target, gamma_image, beta_image) = if b == 1 {
                    let beta = subfield.neg(&gfactor.coeff(0, &subfield));
                    (subfield.clone(), gamma_sub.clone(), beta)
                } else {
                    let target = FieldDescriptor::finite_field(p, a * b)?;
                    let sub_poly = match &*subfield {
                        FieldDescriptor::FiniteField { min_poly, .. } => min_poly.clone(),
                        _ => unreachable!(),
                    };
                    let root = finite::embedding_root(&sub_poly, &target, opts.seed)?;
                    let gamma_image = match &gamma_sub {
                        FieldElement::Fin(coords) => finite::embed_coords(coords, &root, &target),
                        _ => unreachable!(),
                    };
                    // lift fhat into the target and take its first root there
                    let lifted = Polynomial::new(
                        fhat.coeffs()
                            .iter()
                            .map(|c| match c {
                                FieldElement::Fin(coords) => {
                                    finite::embed_coords(coords, &root, &target)
                                }
                                _ => unreachable!(),
                            })
                            .collect(),
                        &target,
                    );
                    let roots = finite::roots(&lifted, &target, opts.seed)?;
                    let beta = roots.into_iter().next().ok_or_else(|| {
                        Error::Internal(
                            "substituted minimal polynomial has no root in the chosen extension"
                                .into(),
                        )
                    })?;
                    (target, gamma_image, beta)
                };
                let checks = vec![
                    CheckedFact::PIsOdd { p },
                    CheckedFact::PGreaterN { p, n },
                    CheckedFact::PNotDividesMu { p, mu: d },
                    CheckedFact::PointNotRootOfMu { mu_at_alpha },
                    CheckedFact::FactorChosen {
                        poly: factor_display.clone(),
                    },
                ];
                Ok(WHomomorphism {
                    variant: PsiVariant::Psi4,
                    source: field.clone(),
                    target,
                    prime: p,
                    point: Some(point),
                    inner: InnerMap::NumberField {
                        gen_image: gamma_image,
                    },
                    beta_image: Some(beta_image),
                    certificate: AdmissibilityCertificate {
                        clause: Clause::CharPGreaterN,
                        checks,
                    },
                    sw: true,
                    mu_display,
                    point_display: Some(point_display),
                    factor_display: Some(factor_display),
                    ftilde_display: Some(ftilde_display),
                })
            }
            _ => unreachable!("characteristic zero bases"),
        }
    } else {
        let p = base.characteristic();
        if let Some(q) = opts.prime {
            if q != p {
                return Err(Error::InvalidInput(format!(
                    "the characteristic fixes the prime to {}; cannot use {}",
                    p, q
                )));
            }
        }
        let clause = small_char_clause(p, n, opts)?;
        let fq = point.field.clone();
        let fhat = Polynomial::new(ftilde.clone(), &fq);
        let gfactors = finite::factor(&fhat, &fq, opts.seed)?;
        let gfactor = gfactors[0].0.clone();
        let b = gfactor.degree().unwrap();
        let factor_display = gfactor.format(&ext_var, &fq);
        let (target, inner, beta_image) = if b == 1 {
            let beta = fq.neg(&gfactor.coeff(0, &fq));
            (fq.clone(), InnerMap::Finite { gen_image: None }, beta)
        } else {
            let k = fq.extension_degree();
            let target = FieldDescriptor::finite_field(p, k * b)?;
            let fq_poly = match &*fq {
                FieldDescriptor::FiniteField { min_poly, .. } => min_poly.clone(),
                _ => unreachable!(),
            };
            let root = finite::embedding_root(&fq_poly, &target, opts.seed)?;
            let lifted = Polynomial::new(
                fhat.coeffs()
                    .iter()
                    .map(|c| match c {
                        FieldElement::Fin(coords) => finite::embed_coords(coords, &root, &target),
                        _ => unreachable!(),
                    })
                    .collect(),
                &target,
            );
            let roots = finite::roots(&lifted, &target, opts.seed)?;
            let beta = roots.into_iter().next().ok_or_else(|| {
                Error::Internal(
                    "substituted minimal polynomial has no root in the chosen extension".into(),
                )
            })?;
            (
                target,
                InnerMap::Finite {
                    gen_image: Some(root),
                },
                beta,
            )
        };
        let mut checks = vec![
            CheckedFact::PointNotRootOfMu { mu_at_alpha },
            CheckedFact::FactorChosen {
                poly: factor_display.clone(),
            },
        ];
        if p > n as u64 {
            checks.push(CheckedFact::PGreaterN { p, n });
        }
        Ok(WHomomorphism {
            variant: PsiVariant::Psi4,
            source: field.clone(),
            target,
            prime: p,
            point: Some(point),
            inner,
            beta_image: Some(beta_image),
            certificate: AdmissibilityCertificate { clause, checks },
            sw: true,
            mu_display,
            point_display: Some(point_display),
            factor_display: Some(factor_display),
            ftilde_display: Some(ftilde_display),
        })
    }
}

/// Build-time validation: the map fixes the identity and is multiplicative
/// on sampled pairs from the generators and their inverses.
fn spot_check(whom: &WHomomorphism, all: &[Matrix], seed: u64) -> Result<()> {
    let n = all[0].n();
    let id = Matrix::identity(n, all[0].field().clone());
    if !whom.apply(&id)?.is_identity() {
        return Err(Error::Internal("congruence map does not fix the identity".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1e995);
    for _ in 0..4 {
        let g = &all[rng.gen_range(0..all.len())];
        let h = &all[rng.gen_range(0..all.len())];
        let lhs = whom.apply(&g.mul(h)?)?;
        let rhs = whom.apply(g)?.mul(&whom.apply(h)?)?;
        if lhs != rhs {
            return Err(Error::Internal(
                "congruence map is not multiplicative on sampled pairs".into(),
            ));
        }
    }
    for g in all {
        let img = whom.apply(g)?;
        if img.inverse().is_err() {
            return Err(Error::Internal(
                "congruence image of a generator is singular".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{mat_str, qq};

    fn opts() -> BuildOptions {
        BuildOptions::default()
    }

    #[test]
    fn prime_selection() {
        let empty = BTreeSet::new();
        assert_eq!(select_prime(&BigInt::from(6), 2, false, &empty), 5);
        assert_eq!(select_prime(&BigInt::from(1), 2, false, &empty), 3);
        let mut forbidden = BTreeSet::new();
        forbidden.insert(3u64);
        assert_eq!(select_prime(&BigInt::from(1), 2, false, &forbidden), 5);
        assert_eq!(select_prime(&BigInt::from(6), 3, true, &empty), 5);
    }

    #[test]
    fn point_selection_over_q() {
        let base = qq();
        // mu = x: 0 is a root, so the first point is 1
        let mu = Polynomial::var(&base);
        let p = select_point(&mu, &base, 0).unwrap();
        assert_eq!(p.alpha, base.from_i64(1));
        // mu = 1: nothing to avoid
        let one = Polynomial::one(&base);
        let p = select_point(&one, &base, 0).unwrap();
        assert_eq!(p.alpha, base.from_i64(0));
    }

    #[test]
    fn point_selection_escapes_to_an_extension() {
        // x^3 - x vanishes on all of GF(3); the point must come from GF(9)
        let base = FieldDescriptor::prime_field(3).unwrap();
        let mu = Polynomial::new(
            vec![base.zero(), base.from_i64(-1), base.zero(), base.one()],
            &base,
        );
        let p = select_point(&mu, &base, 0).unwrap();
        assert_eq!(p.field.extension_degree(), 2, "point lives in GF(9)");
        assert!(!p.field.is_zero(&p.eval(&mu)));
        // enumeration oracle: the first GF(9) element by index that is a
        // non-root must be the one selected
        let count = finite::element_count_u64(&p.field).unwrap();
        let expected = (0..count)
            .map(|i| finite::element_from_index(i, &p.field))
            .find(|alpha| {
                let probe = SelectedPoint {
                    alpha: alpha.clone(),
                    ..p.clone()
                };
                !p.field.is_zero(&probe.eval(&mu))
            })
            .unwrap();
        assert_eq!(p.alpha, expected);
    }

    #[test]
    fn clear_denominators_examples() {
        let f = qq();
        let rot = mat_str(&f, &[&["0", "1"], &["-1", "0"]]);
        let info = clear_denominators(&[rot]).unwrap();
        match info.mu {
            MuDatum::Int(v) => assert_eq!(v, BigInt::from(1)),
            _ => panic!(),
        }
        let half = mat_str(&f, &[&["1/2", "0"], &["0", "2"]]);
        let info = clear_denominators(&[half]).unwrap();
        match info.mu {
            MuDatum::Int(v) => assert_eq!(v, BigInt::from(2)),
            _ => panic!(),
        }
        let fx = FieldDescriptor::function_field(qq(), "x").unwrap();
        let g = mat_str(&fx, &[&["1/(x - 1)", "0"], &["0", "1"]]);
        let info = clear_denominators(&[g.clone()]).unwrap();
        match &info.mu {
            MuDatum::Poly(p) => assert_eq!(p.format("x", &qq()), "x - 1"),
            _ => panic!(),
        }
        // every denominator of S and S^-1 divides mu
        let MuDatum::Poly(mu) = &info.mu else { panic!() };
        for m in [g.clone(), g.inverse().unwrap()] {
            for e in m.entries() {
                if let FieldElement::RatFunc { den, .. } = e {
                    let (_, r) = mu.divrem(den, &qq()).unwrap();
                    assert!(r.is_zero(), "den divides mu");
                }
            }
        }
        let singular = mat_str(&f, &[&["1", "0"], &["0", "0"]]);
        assert!(matches!(
            clear_denominators(&[singular]),
            Err(Error::SingularGenerator(0))
        ));
    }

    #[test]
    fn psi1_reduction_mod_5() {
        let f = qq();
        let gens = vec![
            mat_str(&f, &[&["1/2", "0"], &["0", "2"]]),
            mat_str(&f, &[&["1/3", "0"], &["0", "3"]]),
        ];
        let whom = build_whom(&gens, &opts()).unwrap();
        assert_eq!(whom.variant, PsiVariant::Psi1);
        assert_eq!(whom.prime, 5, "mu = 6 forces p = 5");
        assert!(whom.certificate.recheck());
        let u = mat_str(&f, &[&["1", "1"], &["0", "1"]]);
        let img = whom.apply(&u).unwrap();
        let gf5 = whom.target.clone();
        assert_eq!(img, mat_str(&gf5, &[&["1", "1"], &["0", "1"]]));
        let img = whom.apply(&gens[0]).unwrap();
        assert_eq!(img, mat_str(&gf5, &[&["3", "0"], &["0", "2"]]), "1/2 = 3 mod 5");
    }

    #[test]
    fn psi2_over_the_gaussian_field() {
        let field = FieldDescriptor::number_field(vec![
            BigInt::from(1),
            BigInt::from(0),
            BigInt::from(1),
        ])
        .unwrap();
        let gens = vec![mat_str(&field, &[&["a", "0"], &["0", "-a"]])];
        let whom = build_whom(&gens, &opts()).unwrap();
        assert_eq!(whom.variant, PsiVariant::Psi2);
        assert_eq!(whom.prime, 3);
        assert_eq!(whom.target.extension_degree(), 2, "t^2+1 stays irreducible mod 3");
        assert!(whom.certificate.recheck());
    }

    #[test]
    fn psi2_root_substitution_matches_hand_computation() {
        let field = FieldDescriptor::number_field(vec![
            BigInt::from(1),
            BigInt::from(0),
            BigInt::from(1),
        ])
        .unwrap();
        let gens = vec![mat_str(&field, &[&["a", "0"], &["0", "-a"]])];
        let mut o = opts();
        o.prime = Some(5);
        let whom = build_whom(&gens, &o).unwrap();
        assert_eq!(whom.factor_display.as_deref(), Some("t + 2"), "first factor of t^2+1 mod 5");
        // 3 + 2a maps to 3 + 2*3 = 9 = 4 mod 5
        let e = mat_str(&field, &[&["3 + 2*a", "0"], &["0", "1"]]);
        let img = whom.apply(&e).unwrap();
        assert_eq!(*img.entry(0, 0), whom.target.from_i64(4));
    }

    #[test]
    fn psi3_over_gf19_function_field() {
        let base = FieldDescriptor::prime_field(19).unwrap();
        let field = FieldDescriptor::function_field(base, "x").unwrap();
        let gens = vec![
            mat_str(&field, &[&["1", "x", "0"], &["0", "1", "0"], &["0", "0", "1"]]),
            mat_str(&field, &[&["x", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]),
        ];
        let whom = build_whom(&gens, &opts()).unwrap();
        assert_eq!(whom.variant, PsiVariant::Psi3);
        assert_eq!(whom.prime, 19);
        assert_eq!(whom.mu_display, "x");
        assert_eq!(whom.point_display.as_deref(), Some("1"), "alpha = 1 (0 is a root of mu)");
        assert_eq!(whom.target.extension_degree(), 1, "target is GF(19)");
        assert_eq!(whom.certificate.clause, Clause::CharPGreaterN);
        assert!(whom.certificate.recheck());
        let img = whom.apply(&gens[1]).unwrap();
        assert!(img.is_identity(), "diag(x,1,1) maps to the identity at alpha = 1");
    }

    #[test]
    fn psi3_over_q_function_field_composes_reduction() {
        let field = FieldDescriptor::function_field(qq(), "x").unwrap();
        let gens = vec![
            mat_str(&field, &[&["x", "0"], &["0", "1/2"]]),
        ];
        let whom = build_whom(&gens, &opts()).unwrap();
        assert_eq!(whom.variant, PsiVariant::Psi3);
        // alpha = 1; substituted entries have denominators {2}, so p = 3 > n
        assert_eq!(whom.point_display.as_deref(), Some("1"));
        assert_eq!(whom.prime, 3);
        let img = whom.apply(&gens[0]).unwrap();
        let gf3 = whom.target.clone();
        assert_eq!(img, mat_str(&gf3, &[&["1", "0"], &["0", "2"]]), "1/2 = 2 mod 3");
    }

    #[test]
    fn psi4_over_q_algebraic_function_field() {
        // L(b) with b^2 = x over L = Q(x)
        let base = FieldDescriptor::function_field(qq(), "x").unwrap();
        let inner = qq();
        let minus_x = Polynomial::new(vec![inner.zero(), inner.from_i64(-1)], &inner);
        let field = FieldDescriptor::alg_function_field(
            base,
            vec![minus_x, Polynomial::zero(), Polynomial::one(&inner)],
            "b",
        )
        .unwrap();
        let gens = vec![mat_str(&field, &[&["b", "0"], &["0", "b/x"]])];
        let whom = build_whom(&gens, &opts()).unwrap();
        assert_eq!(whom.variant, PsiVariant::Psi4);
        // alpha = 1, ftilde = t^2 - 1, p = 3, first factor t + 1, beta = -1
        assert_eq!(whom.prime, 3);
        assert_eq!(whom.ftilde_display.as_deref(), Some("b^2 - 1"));
        let img = whom.apply(&gens[0]).unwrap();
        let beta = whom.target.from_i64(-1);
        assert_eq!(*img.entry(0, 0), beta);
        assert!(whom.certificate.recheck());
    }

    #[test]
    fn psi4_in_characteristic_p() {
        let base = FieldDescriptor::function_field(FieldDescriptor::prime_field(3).unwrap(), "x")
            .unwrap();
        let gf3 = FieldDescriptor::prime_field(3).unwrap();
        let minus_x = Polynomial::new(vec![gf3.zero(), gf3.from_i64(-1)], &gf3);
        let field = FieldDescriptor::alg_function_field(
            base,
            vec![minus_x, Polynomial::zero(), Polynomial::one(&gf3)],
            "b",
        )
        .unwrap();
        let gens = vec![mat_str(&field, &[&["b", "0"], &["0", "b/x"]])];
        let whom = build_whom(&gens, &opts()).unwrap();
        assert_eq!(whom.variant, PsiVariant::Psi4);
        assert_eq!(whom.prime, 3);
        assert_eq!(whom.certificate.clause, Clause::CharPGreaterN, "p = 3 > n = 2");
    }

    #[test]
    fn small_characteristic_is_refused_without_the_kernel_conditions() {
        let base = FieldDescriptor::prime_field(3).unwrap();
        let field = FieldDescriptor::function_field(base, "x").unwrap();
        let id = Matrix::identity(4, field.clone());
        let err = build_whom(&[id.clone()], &opts());
        assert!(matches!(err, Err(Error::WHomUnavailable(_))));
        let mut o = opts();
        o.allow_small_char = true;
        let whom = build_whom(&[id], &o).unwrap();
        assert_eq!(whom.certificate.clause, Clause::Provisional);
    }

    #[test]
    fn builds_are_deterministic() {
        let f = qq();
        let gens = vec![mat_str(&f, &[&["1/2", "1"], &["0", "2"]])];
        let a = build_whom(&gens, &opts()).unwrap();
        let b = build_whom(&gens, &opts()).unwrap();
        assert_eq!(a.prime, b.prime);
        assert_eq!(a.mu_display, b.mu_display);
        assert_eq!(a.point_display, b.point_display);
        assert_eq!(a.factor_display, b.factor_display);
    }

    #[test]
    fn multiplicativity_on_sampled_pairs() {
        let f = qq();
        let gens = vec![
            mat_str(&f, &[&["1", "1"], &["0", "1"]]),
            mat_str(&f, &[&["0", "1"], &["-1", "0"]]),
        ];
        let whom = build_whom(&gens, &opts()).unwrap();
        for g in &gens {
            for h in &gens {
                let lhs = whom.apply(&g.mul(h).unwrap()).unwrap();
                let rhs = whom.apply(g).unwrap().mul(&whom.apply(h).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
            let gi = whom.apply(&g.inverse().unwrap()).unwrap();
            assert_eq!(gi, whom.apply(g).unwrap().inverse().unwrap());
        }
    }
}
