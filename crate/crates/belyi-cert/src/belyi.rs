//! Algebraic verification of the three-point branched covers: difference
//! factorization, the exact critical-divisor identity, branch-cycle
//! bookkeeping, Riemann–Hurwitz genus, Galois polynomial emission, and the
//! discriminant square-class and finite-field specialization evidence.

use crate::fppoly::{
    self, irreducibility_certificate, pattern_refines, split_by_degrees, IrreducibilityCertificate,
};
use crate::permgroup::CycleType;
use crate::qpoly::{
    discriminant_at, is_rational_square, same_squarefree_part, DiscError, FactoredPoly, UniPoly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BelyiError {
    #[error("difference p - q is identically zero")]
    ZeroDifference,
    #[error("polynomial error: {0}")]
    Poly(#[from] crate::qpoly::PolyError),
    #[error("finite field error: {0}")]
    Fp(#[from] fppoly::FpError),
}

/// Which of the triple letters a branch value corresponds to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TripleLetter {
    X,
    Y,
    Z,
}

impl fmt::Display for TripleLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleLetter::X => write!(f, "x"),
            TripleLetter::Y => write!(f, "y"),
            TripleLetter::Z => write!(f, "z"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchAssignment {
    pub over_zero: TripleLetter,
    pub over_one: TripleLetter,
    pub over_infinity: TripleLetter,
}

/// The verification target: a factored rational map together with the
/// declared ramification data it must reproduce.
#[derive(Clone, Debug)]
pub struct BelyiMapSpec {
    pub name: String,
    pub degree: usize,
    pub p_factored: FactoredPoly,
    pub q_factored: FactoredPoly,
    pub expected_r_constant: Option<BigRational>,
    pub expected_type_over_zero: CycleType,
    pub expected_type_over_one: CycleType,
    pub expected_type_over_infinity: CycleType,
    pub expected_subdegrees: Vec<usize>,
    /// Degree of the multiplicity-1 part of p - q.
    pub r_simple_total: usize,
    /// Degree of the multiplicity-2 part of p - q.
    pub r_double_total: usize,
    /// Declared irreducible factor degrees of the simple part, when known.
    pub r_simple_factors: Option<Vec<usize>>,
    /// Declared irreducible factor degrees of the doubled part, when known.
    pub r_double_factors: Option<Vec<usize>>,
}

/// Expanded polynomials of a map, computed once and shared.
#[derive(Clone, Debug)]
pub struct ExpandedMap {
    pub p: UniPoly,
    pub q: UniPoly,
    pub r: UniPoly,
}

impl BelyiMapSpec {
    pub fn expand(&self) -> ExpandedMap {
        let p = self.p_factored.expand();
        let q = self.q_factored.expand();
        let r = p.sub(&q);
        ExpandedMap { p, q, r }
    }

    /// f(w) = p(w)/q(w) as an exact rational; `None` at a pole.
    pub fn evaluate(&self, ex: &ExpandedMap, w: &BigRational) -> Option<BigRational> {
        let qv = ex.q.evaluate_at(w);
        if qv.is_zero() {
            return None;
        }
        Some(ex.p.evaluate_at(w) / qv)
    }
}

/// Outcome of the difference factorization check on r = p - q.
#[derive(Clone, Debug)]
pub struct DifferenceReport {
    pub r_degree: usize,
    /// Leading coefficient of r; equals the claimed constant when the parts
    /// are monic integer polynomials.
    pub constant: BigRational,
    pub constant_matches: Option<bool>,
    pub simple_part: UniPoly,
    pub double_part: UniPoly,
    pub simple_degree: usize,
    pub double_degree: usize,
    pub shape_matches: bool,
    pub reconstruction_exact: bool,
    pub parts_coprime: bool,
    /// Recovered irreducible factors of the simple part, when declared.
    pub simple_factors: Option<Vec<UniPoly>>,
    /// Recovered irreducible factors of the doubled part, when declared.
    pub double_factors: Option<Vec<UniPoly>>,
    /// (label, certificate) per recovered factor.
    pub irreducibility: Vec<(String, Option<IrreducibilityCertificate>)>,
    pub findings: Vec<String>,
}

impl DifferenceReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Checks that p - q factors as `constant * simple * double^2` with the
/// declared degree split, recovers the declared irreducible factors, and
/// attaches irreducibility certificates.
pub fn verify_difference(
    spec: &BelyiMapSpec,
    ex: &ExpandedMap,
    seed: u64,
) -> Result<DifferenceReport, BelyiError> {
    let r = &ex.r;
    let r_degree = r.degree().ok_or(BelyiError::ZeroDifference)?;
    let mut findings = Vec::new();

    let expected_r_degree = spec.r_simple_total + 2 * spec.r_double_total;
    if r_degree != expected_r_degree {
        findings.push(format!(
            "deg(p - q) = {r_degree}, expected {expected_r_degree}"
        ));
    }

    let parts = r.squarefree_decomposition()?;
    let mut simple_part = UniPoly::one();
    let mut double_part = UniPoly::one();
    for (m, part) in &parts {
        match m {
            1 => simple_part = part.clone(),
            2 => double_part = part.clone(),
            other => findings.push(format!(
                "p - q has a factor of unexpected multiplicity {other} (degree {:?})",
                part.degree()
            )),
        }
    }
    let simple_degree = simple_part.degree().unwrap_or(0);
    let double_degree = double_part.degree().unwrap_or(0);
    let shape_matches =
        simple_degree == spec.r_simple_total && double_degree == spec.r_double_total;
    if !shape_matches {
        findings.push(format!(
            "squarefree split of p - q is {simple_degree} simple / {double_degree} doubled, \
             expected {} / {}",
            spec.r_simple_total, spec.r_double_total
        ));
    }

    let constant = r.leading_coeff();
    let reconstruction = simple_part
        .mul(&double_part.pow(2))
        .scale(&constant);
    let reconstruction_exact = reconstruction == *r;
    if !reconstruction_exact {
        findings.push("p - q does not equal constant * simple * double^2 exactly".into());
    }
    let parts_coprime = simple_part.gcd(&double_part).degree() == Some(0)
        || simple_degree == 0
        || double_degree == 0;
    if !parts_coprime {
        findings.push("simple and doubled parts of p - q share a factor".into());
    }

    let constant_matches = spec.expected_r_constant.as_ref().map(|expected| {
        let ok = constant == *expected;
        if !ok {
            findings.push(format!(
                "extracted constant {constant} differs from expected {expected}"
            ));
        }
        ok
    });

    let mut irreducibility = Vec::new();
    let mut recover = |part: &UniPoly,
                       degrees: &Option<Vec<usize>>,
                       label: &str,
                       findings: &mut Vec<String>|
     -> Result<Option<Vec<UniPoly>>, BelyiError> {
        let degrees = match degrees {
            None => return Ok(None),
            Some(d) => d,
        };
        match split_by_degrees(part, degrees, seed)? {
            None => {
                findings.push(format!(
                    "could not split the {label} part into factors of degrees {degrees:?}"
                ));
                Ok(None)
            }
            Some(factors) => Ok(Some(factors)),
        }
    };
    let simple_factors = recover(&simple_part, &spec.r_simple_factors, "simple", &mut findings)?;
    let double_factors = recover(&double_part, &spec.r_double_factors, "doubled", &mut findings)?;
    for (group, factors) in [("simple", &simple_factors), ("double", &double_factors)] {
        if let Some(factors) = factors {
            for f in factors {
                let d = f.degree().unwrap_or(0);
                let label = format!("{group} factor of degree {d}");
                let cert = irreducibility_certificate(f, 200)?;
                if cert.is_none() {
                    findings.push(format!("no irreducibility certificate found for {label}"));
                }
                irreducibility.push((label, cert));
            }
        }
    }

    Ok(DifferenceReport {
        r_degree,
        constant,
        constant_matches,
        simple_part,
        double_part,
        simple_degree,
        double_degree,
        shape_matches,
        reconstruction_exact,
        parts_coprime,
        simple_factors,
        double_factors,
        irreducibility,
        findings,
    })
}

/// Outcome of the exact critical-divisor identity check.
#[derive(Clone, Debug)]
pub struct CriticalDivisorReport {
    pub w_degree: usize,
    pub expected_w_degree: usize,
    pub identity_holds: bool,
    pub constant: BigRational,
    /// Degree of the part of W not explained by the predicted divisor, when
    /// the identity fails.
    pub leftover_degree: Option<usize>,
    pub findings: Vec<String>,
}

impl CriticalDivisorReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Verifies the exact polynomial identity
/// `W = p'q - pq' = constant * prod base^(exp-1) * double_part(r)`,
/// which simultaneously proves there is no critical value outside
/// {0, 1, infinity}.
pub fn critical_divisor_check(
    spec: &BelyiMapSpec,
    ex: &ExpandedMap,
    diff: &DifferenceReport,
) -> CriticalDivisorReport {
    let w = ex.p.derivative().mul(&ex.q).sub(&ex.p.mul(&ex.q.derivative()));
    let mut findings = Vec::new();
    let w_degree = match w.degree() {
        None => {
            return CriticalDivisorReport {
                w_degree: 0,
                expected_w_degree: 0,
                identity_holds: false,
                constant: BigRational::zero(),
                leftover_degree: None,
                findings: vec!["p'q - pq' is identically zero".into()],
            }
        }
        Some(d) => d,
    };

    let mut predicted = diff.double_part.clone();
    let mut expected_w_degree = diff.double_part.degree().unwrap_or(0);
    for (base, e) in spec
        .p_factored
        .factors
        .iter()
        .chain(spec.q_factored.factors.iter())
    {
        if *e > 1 {
            predicted = predicted.mul(&base.pow(e - 1));
            expected_w_degree += base.degree().unwrap_or(0) * (*e as usize - 1);
        }
    }

    if w_degree != expected_w_degree {
        findings.push(format!(
            "deg(p'q - pq') = {w_degree}, expected {expected_w_degree}"
        ));
    }
    let constant = w.leading_coeff() / predicted.leading_coeff();
    let identity_holds = w == predicted.scale(&constant);
    let mut leftover_degree = None;
    if !identity_holds {
        let g = w.gcd(&predicted);
        let leftover = w
            .exact_div(&g)
            .map(|l| l.degree().unwrap_or(0))
            .unwrap_or(w_degree);
        leftover_degree = Some(leftover);
        findings.push(format!(
            "critical divisor identity fails: leftover factor of degree {leftover}"
        ));
    }

    CriticalDivisorReport {
        w_degree,
        expected_w_degree,
        identity_holds,
        constant,
        leftover_degree,
        findings,
    }
}

/// Ramification multiplicities over one branch value as (multiplicity,
/// number of points), including the point at infinity when applicable.
pub type FiberProfile = CycleType;

#[derive(Clone, Debug)]
pub struct RamificationProfile {
    pub over_zero: FiberProfile,
    pub over_one: FiberProfile,
    pub over_infinity: FiberProfile,
}

#[derive(Clone, Debug)]
pub struct BranchCycleReport {
    pub profile: RamificationProfile,
    pub findings: Vec<String>,
}

impl BranchCycleReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Derives the ramification profile over 0, 1 and infinity from the
/// factored shapes (with explicit degree bookkeeping for the point at
/// infinity) and compares it with the declared cycle types.
pub fn branch_cycle_consistency(
    spec: &BelyiMapSpec,
    ex: &ExpandedMap,
    diff: &DifferenceReport,
) -> BranchCycleReport {
    let degree = spec.degree;
    let deg_p = ex.p.degree().unwrap_or(0);
    let deg_q = ex.q.degree().unwrap_or(0);
    let deg_r = diff.r_degree;
    let mut findings = Vec::new();

    let profile_from_factored = |f: &FactoredPoly, at_infinity: Option<usize>| -> FiberProfile {
        let mut parts: Vec<(usize, usize)> = Vec::new();
        let mut add = |mult: usize, count: usize, parts: &mut Vec<(usize, usize)>| {
            if count == 0 || mult == 0 {
                return;
            }
            match parts.iter_mut().find(|(m, _)| *m == mult) {
                Some((_, c)) => *c += count,
                None => parts.push((mult, count)),
            }
        };
        for (base, e) in &f.factors {
            add(*e as usize, base.degree().unwrap_or(0), &mut parts);
        }
        if let Some(m) = at_infinity {
            add(m, 1, &mut parts);
        }
        CycleType::new(parts)
    };

    // Infinity bookkeeping: with deg p = deg q, f(infinity) is the ratio of
    // leading coefficients; it lies over 1 exactly when that ratio is 1, in
    // which case the multiplicity is degree - deg(p - q).
    let lc_ratio_is_one = deg_p == deg_q && ex.p.leading_coeff() == ex.q.leading_coeff();
    let inf_over_zero = if deg_p < deg_q.max(degree) && deg_q == degree {
        Some(degree - deg_p)
    } else {
        None
    };
    let inf_over_infinity = if deg_q < deg_p.max(degree) && deg_p == degree {
        Some(degree - deg_q)
    } else {
        None
    };
    let inf_over_one = if lc_ratio_is_one { Some(degree - deg_r) } else { None };

    let over_zero = profile_from_factored(&spec.p_factored, inf_over_zero);
    let over_infinity = profile_from_factored(&spec.q_factored, inf_over_infinity);

    let mut one_parts: Vec<(usize, usize)> = Vec::new();
    if diff.simple_degree > 0 {
        one_parts.push((1, diff.simple_degree));
    }
    if diff.double_degree > 0 {
        one_parts.push((2, diff.double_degree));
    }
    if let Some(m) = inf_over_one {
        match one_parts.iter_mut().find(|(mm, _)| *mm == m) {
            Some((_, c)) => *c += 1,
            None => one_parts.push((m, 1)),
        }
    }
    let over_one = CycleType::new(one_parts);

    for (name, got, expected) in [
        ("0", &over_zero, &spec.expected_type_over_zero),
        ("1", &over_one, &spec.expected_type_over_one),
        ("infinity", &over_infinity, &spec.expected_type_over_infinity),
    ] {
        if got.degree() != degree {
            findings.push(format!(
                "fiber over {name} has total multiplicity {}, expected {degree}",
                got.degree()
            ));
        }
        if got != expected {
            findings.push(format!(
                "fiber over {name} has profile {got}, expected {expected}"
            ));
        }
    }

    BranchCycleReport {
        profile: RamificationProfile {
            over_zero,
            over_one,
            over_infinity,
        },
        findings,
    }
}

/// Genus from the Riemann–Hurwitz count `2*degree - 2 + 2g = sum over the
/// three types of (degree - #cycles)`.
pub fn riemann_hurwitz_genus(types: &[CycleType; 3], degree: usize) -> Result<i64, String> {
    for t in types {
        if t.degree() != degree {
            return Err(format!(
                "cycle type {t} sums to {}, expected {degree}",
                t.degree()
            ));
        }
    }
    let total: i64 = types
        .iter()
        .map(|t| degree as i64 - t.num_cycles() as i64)
        .sum();
    let twice_genus = total - (2 * degree as i64 - 2);
    if twice_genus % 2 != 0 {
        return Err(format!(
            "ramification total {total} has the wrong parity for degree {degree}"
        ));
    }
    let genus = twice_genus / 2;
    if genus < 0 {
        return Err(format!("negative genus {genus} from total {total}"));
    }
    Ok(genus)
}

/// Substitution applied to the multiplier of q when emitting the family of
/// Galois polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// p(X) - t q(X)
    T,
    /// p(X) - (2t^2 + 1) q(X)
    TwoTSquaredPlusOne,
    /// p(X) - c q(X) for a fixed integer c
    Constant(BigInt),
}

/// Emits `p(X) - s(t) q(X)` in the canonical bivariate text format: every
/// nonzero term printed as `c*X^i*t^j`, descending in the X power with
/// ascending t powers inside each, joined by " + " (negative coefficients
/// keep their sign).
pub fn emit_galois_polynomial(ex: &ExpandedMap, subst: &Substitution) -> String {
    let n = ex.p.degree().unwrap_or(0).max(ex.q.degree().unwrap_or(0));
    let mut terms: Vec<String> = Vec::new();
    for i in (0..=n).rev() {
        let pi = ex.p.coeff(i);
        let qi = ex.q.coeff(i);
        // (j, coefficient) pairs for this X power, ascending j.
        let pairs: Vec<(usize, BigRational)> = match subst {
            Substitution::T => vec![(0, pi.clone()), (1, -qi.clone())],
            Substitution::TwoTSquaredPlusOne => {
                vec![(0, &pi - &qi), (2, -qi.clone() * BigRational::from_integer(2.into()))]
            }
            Substitution::Constant(c) => {
                vec![(0, &pi - &qi * BigRational::from_integer(c.clone()))]
            }
        };
        for (j, c) in pairs {
            if c.is_zero() {
                continue;
            }
            debug_assert!(c.is_integer(), "emitted coefficients must be integers");
            terms.push(format!("{}*X^{i}*t^{j}", c.numer()));
        }
    }
    terms.join(" + ")
}

/// One sampled point of discriminant evidence.
#[derive(Clone, Debug)]
pub struct DiscSample {
    pub parameter: BigRational,
    pub specialized_at: BigRational,
    pub outcome: DiscSampleOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscSampleOutcome {
    Agrees,
    Counterexample(String),
    Skipped(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscFamily {
    /// delta(t0) must lie in the square class of 2(t0 - 1).
    T,
    /// delta(2 s0^2 + 1) must be a rational square.
    TwoTSquaredPlusOne,
}

impl fmt::Display for DiscFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscFamily::T => write!(f, "t"),
            DiscFamily::TwoTSquaredPlusOne => write!(f, "2t^2+1"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscEvidenceReport {
    pub family: DiscFamily,
    pub samples: Vec<DiscSample>,
    pub required: usize,
    pub completed: usize,
}

impl DiscEvidenceReport {
    pub fn passed(&self) -> bool {
        self.completed >= self.required
            && self
                .samples
                .iter()
                .all(|s| !matches!(s.outcome, DiscSampleOutcome::Counterexample(_)))
    }
}

/// Evaluates the discriminant square-class claim at the given sample
/// parameters. Degenerate samples (branch values, degree drops) are
/// skipped and recorded, never silently dropped.
pub fn discriminant_square_evidence(
    ex: &ExpandedMap,
    family: DiscFamily,
    samples: &[BigRational],
    required: usize,
) -> DiscEvidenceReport {
    use rayon::prelude::*;
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let evaluated: Vec<DiscSample> = samples
        .par_iter()
        .map(|s0| {
            let t0 = match family {
                DiscFamily::T => s0.clone(),
                DiscFamily::TwoTSquaredPlusOne => &two * s0 * s0 + &one,
            };
            let outcome = if t0.is_zero() || t0.is_one() {
                DiscSampleOutcome::Skipped(format!("t0 = {t0} is a branch value"))
            } else if family == DiscFamily::TwoTSquaredPlusOne && s0.is_zero() {
                DiscSampleOutcome::Skipped("s0 = 0 specializes to the branch value 1".into())
            } else {
                match discriminant_at(&ex.p, &ex.q, &t0) {
                    Err(DiscError::DegreeDrop { expected, found }) => DiscSampleOutcome::Skipped(
                        format!("degree drop at t0 = {t0}: {found} < {expected}"),
                    ),
                    Err(e) => DiscSampleOutcome::Skipped(e.to_string()),
                    Ok(delta) => {
                        if delta.is_zero() {
                            DiscSampleOutcome::Skipped(format!(
                                "discriminant vanishes at t0 = {t0} (unexpected branch value)"
                            ))
                        } else {
                            match family {
                                DiscFamily::T => {
                                    let reference = &two * (&t0 - &one);
                                    match same_squarefree_part(&delta, &reference) {
                                        Ok(true) => DiscSampleOutcome::Agrees,
                                        Ok(false) => DiscSampleOutcome::Counterexample(format!(
                                            "delta(t0) is not in the square class of 2(t0-1) at t0 = {t0}"
                                        )),
                                        Err(e) => DiscSampleOutcome::Skipped(e.to_string()),
                                    }
                                }
                                DiscFamily::TwoTSquaredPlusOne => {
                                    if is_rational_square(&delta) {
                                        DiscSampleOutcome::Agrees
                                    } else {
                                        DiscSampleOutcome::Counterexample(format!(
                                            "delta(2*{s0}^2+1) is not a rational square"
                                        ))
                                    }
                                }
                            }
                        }
                    }
                }
            };
            DiscSample {
                parameter: s0.clone(),
                specialized_at: t0,
                outcome,
            }
        })
        .collect();
    let completed = evaluated
        .iter()
        .filter(|s| s.outcome == DiscSampleOutcome::Agrees)
        .count();
    DiscEvidenceReport {
        family,
        samples: evaluated,
        required,
        completed,
    }
}

/// One finite-field specialization sample: the map is evaluated at a
/// rational point w, and the factor degree pattern of `p - f(w) q` is
/// reduced modulo several primes.
#[derive(Clone, Debug)]
pub struct SpecializationSample {
    pub w: BigRational,
    pub value: Option<BigRational>,
    pub patterns: Vec<(u64, Vec<usize>, bool)>,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SpecializationReport {
    pub targets: Vec<usize>,
    pub samples: Vec<SpecializationSample>,
    pub required_samples: usize,
    pub primes_per_sample: usize,
}

impl SpecializationReport {
    pub fn passed(&self) -> bool {
        let good = self
            .samples
            .iter()
            .filter(|s| {
                s.skipped.is_none()
                    && s.patterns.len() >= self.primes_per_sample
                    && s.patterns.iter().all(|(_, _, refines)| *refines)
            })
            .count();
        good >= self.required_samples
            && self
                .samples
                .iter()
                .all(|s| s.patterns.iter().all(|(_, _, refines)| *refines))
    }
}

/// For each sample w, specializes the multiplier to the exact rational
/// value f(w) (so the generic factorization degrees apply) and checks that
/// the factor degree pattern modulo each good prime refines the declared
/// subdegrees.
pub fn specialization_evidence(
    spec: &BelyiMapSpec,
    ex: &ExpandedMap,
    samples: &[BigRational],
    primes_per_sample: usize,
    required_samples: usize,
) -> SpecializationReport {
    use rayon::prelude::*;
    let targets = spec.expected_subdegrees.clone();
    let evaluated: Vec<SpecializationSample> = samples
        .par_iter()
        .map(|w| {
            let value = match spec.evaluate(ex, w) {
                None => {
                    return SpecializationSample {
                        w: w.clone(),
                        value: None,
                        patterns: Vec::new(),
                        skipped: Some(format!("w = {w} is a pole of the map")),
                    }
                }
                Some(v) => v,
            };
            if value.is_zero() || value.is_one() {
                return SpecializationSample {
                    w: w.clone(),
                    value: Some(value.clone()),
                    patterns: Vec::new(),
                    skipped: Some(format!("f({w}) = {value} is a branch value")),
                };
            }
            let h = ex.p.sub(&ex.q.scale(&value));
            if h.degree() != Some(spec.degree) {
                return SpecializationSample {
                    w: w.clone(),
                    value: Some(value),
                    patterns: Vec::new(),
                    skipped: Some("degree drop in the specialized polynomial".into()),
                };
            }
            let mut patterns = Vec::new();
            for prime in crate::primes::primes_from(1009) {
                if patterns.len() >= primes_per_sample {
                    break;
                }
                let reduced = match fppoly::ModPoly::reduce(&h, prime) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                if reduced.degree() != Some(spec.degree) {
                    continue;
                }
                let pattern = match reduced.factor_degree_pattern() {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                let refines = pattern_refines(&pattern, &targets);
                patterns.push((prime, pattern, refines));
            }
            SpecializationSample {
                w: w.clone(),
                value: Some(value),
                patterns,
                skipped: None,
            }
        })
        .collect();
    SpecializationReport {
        targets,
        samples: evaluated,
        required_samples,
        primes_per_sample,
    }
}
