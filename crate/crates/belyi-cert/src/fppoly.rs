//! Polynomial arithmetic and factorization patterns over prime fields:
//! distinct-degree patterns, Cantor–Zassenhaus splitting, irreducibility
//! certificates, and CRT recovery of integer factors with prescribed
//! degrees (verified by exact multiplication, so the result is a proof).

use crate::modp;
use crate::primes::{is_prime_u64, mulmod, primes_from, submod};
use crate::qpoly::UniPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} divides a coefficient denominator")]
    BadPrime { prime: u64 },
    #[error("polynomial is not squarefree mod {prime}")]
    NotSquarefree { prime: u64 },
    #[error("operation requires a nonconstant polynomial")]
    Constant,
    #[error("equal-degree splitting requires an odd prime, got {0}")]
    EvenPrime(u64),
}

/// Dense polynomial over the prime field F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    prime: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    /// Coefficientwise reduction of a rational polynomial mod `prime`.
    /// Fails when the prime divides some coefficient denominator.
    pub fn reduce(a: &UniPoly, prime: u64) -> Result<ModPoly, FpError> {
        if !is_prime_u64(prime) {
            return Err(FpError::NotPrime(prime));
        }
        let mut coeffs = Vec::with_capacity(a.coeffs().len());
        for c in a.coeffs() {
            let den = modp::bigint_mod(c.denom(), prime);
            if den == 0 {
                return Err(FpError::BadPrime { prime });
            }
            let num = modp::bigint_mod(c.numer(), prime);
            coeffs.push(mulmod(num, crate::primes::invmod(den, prime), prime));
        }
        modp::trim(&mut coeffs);
        Ok(ModPoly { prime, coeffs })
    }

    pub fn from_coeffs(prime: u64, mut coeffs: Vec<u64>) -> Result<ModPoly, FpError> {
        if !is_prime_u64(prime) {
            return Err(FpError::NotPrime(prime));
        }
        for c in coeffs.iter_mut() {
            *c %= prime;
        }
        modp::trim(&mut coeffs);
        Ok(ModPoly { prime, coeffs })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        modp::deg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn with(&self, coeffs: Vec<u64>) -> ModPoly {
        ModPoly {
            prime: self.prime,
            coeffs,
        }
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        debug_assert_eq!(self.prime, other.prime);
        self.with(modp::mul(&self.coeffs, &other.coeffs, self.prime))
    }

    pub fn rem(&self, other: &ModPoly) -> ModPoly {
        self.with(modp::rem(&self.coeffs, &other.coeffs, self.prime))
    }

    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        self.with(modp::gcd_monic(&self.coeffs, &other.coeffs, self.prime))
    }

    pub fn derivative(&self) -> ModPoly {
        self.with(modp::derivative(&self.coeffs, self.prime))
    }

    pub fn monic(&self) -> ModPoly {
        let mut c = self.coeffs.clone();
        modp::make_monic(&mut c, self.prime);
        self.with(c)
    }

    /// Exact quotient (panics on nonzero remainder; internal use).
    fn exact_div(&self, other: &ModPoly) -> ModPoly {
        let p = self.prime;
        let db = other.degree().expect("divisor nonzero");
        let inv_lb = crate::primes::invmod(modp::lc(&other.coeffs), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = modp::deg(&r) {
            if dr < db {
                break;
            }
            let factor = mulmod(r[dr], inv_lb, p);
            let shift = dr - db;
            q[shift] = factor;
            for (j, &bj) in other.coeffs.iter().enumerate() {
                if bj != 0 {
                    r[j + shift] = submod(r[j + shift], mulmod(factor, bj, p), p);
                }
            }
            r[dr] = 0;
            modp::trim(&mut r);
        }
        debug_assert!(r.is_empty(), "inexact division");
        modp::trim(&mut q);
        self.with(q)
    }

    /// True when gcd(f, f') is constant; a vanishing derivative (p-th power)
    /// counts as not squarefree.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return false;
                }
                self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// `base^exp mod self` for a u64 exponent.
    fn powmod(&self, base: &ModPoly, mut exp: u64) -> ModPoly {
        let mut acc = self.with(vec![1]);
        let mut b = base.rem(self);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&b).rem(self);
            }
            b = b.mul(&b).rem(self);
            exp >>= 1;
        }
        acc
    }

    /// `base^exp mod self` for a big exponent.
    fn powmod_big(&self, base: &ModPoly, exp: &BigUint) -> ModPoly {
        let mut acc = self.with(vec![1]);
        let mut b = base.rem(self);
        for i in 0..exp.bits() {
            if exp.bit(i) {
                acc = acc.mul(&b).rem(self);
            }
            if i + 1 < exp.bits() {
                b = b.mul(&b).rem(self);
            }
        }
        acc
    }

    /// Distinct-degree split of a monic squarefree polynomial: pairs
    /// `(d, product of all irreducible factors of degree d)`, ascending.
    fn distinct_degree_split(&self) -> Vec<(usize, ModPoly)> {
        let p = self.prime;
        let mut f = self.monic();
        let x = self.with(vec![0, 1]);
        let mut h = x.rem(&f); // X^{p^0} = X
        let mut out = Vec::new();
        let mut d = 0usize;
        while f.degree().map(|n| n > 0).unwrap_or(false) {
            let n = f.degree().unwrap();
            d += 1;
            if 2 * d > n {
                out.push((n, f.clone()));
                break;
            }
            h = f.powmod(&h, p);
            let mut diff = modp::sub(h.coeffs(), &x.coeffs, p);
            modp::trim(&mut diff);
            let g = f.gcd(&self.with(diff));
            if g.degree().map(|dg| dg > 0).unwrap_or(false) {
                out.push((d, g.clone()));
                f = f.exact_div(&g);
                h = h.rem(&f);
            }
        }
        out
    }

    /// Multiset of irreducible factor degrees of a squarefree polynomial,
    /// sorted ascending.
    pub fn factor_degree_pattern(&self) -> Result<Vec<usize>, FpError> {
        match self.degree() {
            None | Some(0) => return Err(FpError::Constant),
            Some(_) => {}
        }
        if !self.is_squarefree() {
            return Err(FpError::NotSquarefree { prime: self.prime });
        }
        let mut out = Vec::new();
        for (d, g) in self.distinct_degree_split() {
            let count = g.degree().unwrap() / d;
            out.extend(std::iter::repeat(d).take(count));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Full factorization of a monic squarefree polynomial into monic
    /// irreducibles (Cantor–Zassenhaus equal-degree splitting; odd p only).
    /// Deterministic for a fixed seed.
    pub fn factor_squarefree(&self, seed: u64) -> Result<Vec<ModPoly>, FpError> {
        match self.degree() {
            None | Some(0) => return Err(FpError::Constant),
            Some(_) => {}
        }
        if self.prime == 2 {
            return Err(FpError::EvenPrime(2));
        }
        if !self.is_squarefree() {
            return Err(FpError::NotSquarefree { prime: self.prime });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (d, g) in self.monic().distinct_degree_split() {
            let mut stack = vec![g];
            while let Some(h) = stack.pop() {
                let dh = h.degree().unwrap();
                if dh == d {
                    out.push(h.monic());
                    continue;
                }
                let exp = (BigUint::from(self.prime).pow(d as u32) - 1u32) / 2u32;
                loop {
                    let a = self.with({
                        let mut v: Vec<u64> =
                            (0..dh).map(|_| rng.random_range(0..self.prime)).collect();
                        modp::trim(&mut v);
                        v
                    });
                    if a.degree().map(|da| da < 1).unwrap_or(true) {
                        continue;
                    }
                    let mut b = h.powmod_big(&a, &exp).coeffs;
                    // b - 1
                    if b.is_empty() {
                        b = vec![self.prime - 1];
                    } else {
                        b[0] = submod(b[0], 1, self.prime);
                        modp::trim(&mut b);
                    }
                    let split = h.gcd(&self.with(b));
                    if let Some(ds) = split.degree() {
                        if ds > 0 && ds < dh {
                            stack.push(h.exact_div(&split));
                            stack.push(split);
                            break;
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs.cmp(&b.coeffs))
        });
        Ok(out)
    }
}

/// A proof that an integer polynomial is irreducible over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityCertificate {
    /// Irreducible modulo this prime, hence over Q.
    SinglePrime { prime: u64 },
    /// No single prime certified within budget, but the intersection of the
    /// divisor-degree sets implied by the patterns leaves only the trivial
    /// divisor degrees {0, n}.
    PatternIntersection {
        primes: Vec<u64>,
        patterns: Vec<Vec<usize>>,
    },
    /// Complete recombination search at one prime: the factorization mod
    /// `prime` was lifted past the factor coefficient bound and no proper
    /// subset of the modular factors recombines to an integer divisor, so
    /// no rational factorization exists.
    RecombinationExhaustion { prime: u64, pattern: Vec<usize> },
}

/// Set of degrees realizable as sums of sub-multisets of `pattern`
/// (the possible degrees of divisors consistent with one reduction).
pub fn subset_degree_sums(pattern: &[usize]) -> BTreeSet<usize> {
    let total: usize = pattern.iter().sum();
    let mut reachable = vec![false; total + 1];
    reachable[0] = true;
    for &part in pattern {
        for s in (0..=total - part).rev() {
            if reachable[s] {
                reachable[s + part] = true;
            }
        }
    }
    reachable
        .iter()
        .enumerate()
        .filter_map(|(d, &ok)| if ok { Some(d) } else { None })
        .collect()
}

/// Intersection over all patterns of the divisor-degree sets.
pub fn divisor_degree_intersection(patterns: &[Vec<usize>]) -> BTreeSet<usize> {
    let mut iter = patterns.iter();
    let mut acc = match iter.next() {
        None => return BTreeSet::new(),
        Some(p) => subset_degree_sums(p),
    };
    for p in iter {
        let s = subset_degree_sums(p);
        acc = acc.intersection(&s).copied().collect();
    }
    acc
}

/// True when `pattern` can be grouped into sub-multisets whose sums are
/// exactly `targets` (so the pattern refines the target partition).
pub fn pattern_refines(pattern: &[usize], targets: &[usize]) -> bool {
    count_grouped_partitions(pattern, targets, 1) >= 1
}

/// Searches ascending primes for an irreducibility certificate of a
/// nonconstant rational polynomial (content ignored): first a single prime
/// with an irreducible reduction, then the divisor-degree pattern
/// intersection, and finally a complete recombination search at one good
/// prime. Returns `None` when every route is exhausted without a proof;
/// never claims reducibility.
pub fn irreducibility_certificate(
    a: &UniPoly,
    prime_budget: usize,
) -> Result<Option<IrreducibilityCertificate>, FpError> {
    let n = match a.degree() {
        None | Some(0) => return Err(FpError::Constant),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(Some(IrreducibilityCertificate::SinglePrime { prime: 2 }));
    }
    let mut primes_used = Vec::new();
    let mut patterns = Vec::new();
    for p in primes_from(2).take(prime_budget) {
        let reduced = match ModPoly::reduce(a, p) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if reduced.degree() != Some(n) {
            continue; // leading coefficient vanished
        }
        let pattern = match reduced.factor_degree_pattern() {
            Ok(pat) => pat,
            Err(_) => continue, // not squarefree mod p
        };
        if pattern == vec![n] {
            return Ok(Some(IrreducibilityCertificate::SinglePrime { prime: p }));
        }
        primes_used.push(p);
        patterns.push(pattern);
    }
    if primes_used.len() >= 10 {
        let degrees = divisor_degree_intersection(&patterns);
        if degrees.iter().all(|&d| d == 0 || d == n) {
            return Ok(Some(IrreducibilityCertificate::PatternIntersection {
                primes: primes_used,
                patterns,
            }));
        }
    }
    recombination_exhaustion(a, 0x5EED)
}

/// Zassenhaus-style irreducibility proof: lift the factorization at one
/// good prime past the divisor coefficient bound and check that no proper
/// subset of the modular factors recombines to an integer divisor.
fn recombination_exhaustion(
    a: &UniPoly,
    seed: u64,
) -> Result<Option<IrreducibilityCertificate>, FpError> {
    let n = match a.degree() {
        None | Some(0) => return Err(FpError::Constant),
        Some(n) => n,
    };
    let (_, prim) = a.content_and_primitive();
    let a_prim = UniPoly::from_bigint_coeffs(prim.clone());
    let lead = prim.last().unwrap().clone();
    // A reducible polynomial has a factor of degree <= n/2.
    let half = n / 2;
    let norm2_sq: BigInt = prim.iter().map(|c| c * c).sum();
    let bound: BigInt = (norm2_sq.sqrt() + 1) * binomial(half, half / 2) * lead.abs();

    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut admissible = 0usize;
    for p in primes_from(101).take(600) {
        if modp::bigint_mod(&lead, p) == 0 {
            continue;
        }
        let reduced = match ModPoly::reduce(&a_prim, p) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if reduced.degree() != Some(n) || !reduced.is_squarefree() {
            continue;
        }
        let pattern = reduced.factor_degree_pattern()?;
        admissible += 1;
        let better = match &best {
            None => true,
            Some((_, b)) => pattern.len() < b.len(),
        };
        if better {
            best = Some((p, pattern));
        }
        if admissible >= 25 {
            break;
        }
    }
    let (p, pattern) = match best {
        None => return Ok(None),
        Some(b) => b,
    };
    if pattern.len() > 14 {
        return Ok(None); // subset search too wide for a cheap certificate
    }
    let reduced = ModPoly::reduce(&a_prim, p)?;
    let modular_factors = reduced.monic().factor_squarefree(seed ^ p)?;
    let lifted = hensel_lift_monic(&prim, &modular_factors, p, &bound);
    if has_proper_subset_divisor(&lifted, &lead, &a_prim, half) {
        return Ok(None);
    }
    Ok(Some(IrreducibilityCertificate::RecombinationExhaustion {
        prime: p,
        pattern,
    }))
}

/// True when some nonempty subset of the lifted factors with total degree
/// in [1, max_deg] recombines to an exact divisor.
fn has_proper_subset_divisor(
    lifted: &LiftedFactorization,
    lead: &BigInt,
    a_prim: &UniPoly,
    max_deg: usize,
) -> bool {
    let degrees: Vec<usize> = lifted.factors.iter().map(|f| f.len() - 1).collect();
    fn dfs(
        pos: usize,
        used_deg: usize,
        chosen: &mut Vec<usize>,
        degrees: &[usize],
        lifted: &LiftedFactorization,
        lead: &BigInt,
        a_prim: &UniPoly,
        max_deg: usize,
    ) -> bool {
        if !chosen.is_empty() && used_deg >= 1 {
            let mut prod: Vec<BigInt> = vec![mod_reduce(lead, &lifted.modulus)];
            for &c in chosen.iter() {
                prod = bigint_poly_mul_mod(&prod, &lifted.factors[c], &lifted.modulus);
            }
            let coeffs: Vec<BigInt> = prod
                .iter()
                .map(|r| modp::symmetric_lift(r, &lifted.modulus))
                .collect();
            let candidate = UniPoly::from_bigint_coeffs(coeffs);
            let (_, cp) = candidate.content_and_primitive();
            let candidate = UniPoly::from_bigint_coeffs(cp);
            if let Ok((_, r)) = a_prim.divrem(&candidate) {
                if r.is_zero() {
                    return true;
                }
            }
        }
        for next in pos..degrees.len() {
            if used_deg + degrees[next] <= max_deg {
                chosen.push(next);
                if dfs(
                    next + 1,
                    used_deg + degrees[next],
                    chosen,
                    degrees,
                    lifted,
                    lead,
                    a_prim,
                    max_deg,
                ) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    dfs(0, 0, &mut chosen, &degrees, lifted, lead, a_prim, max_deg)
}

/// Enumerates the ways (up to permuting equal parts) to split `pattern`
/// into labeled groups with the given sums, stopping at `limit` solutions.
/// Each solution maps bin index -> multiset of part sizes.
fn enumerate_grouped_partitions(
    pattern: &[usize],
    targets: &[usize],
    limit: usize,
) -> Vec<Vec<Vec<usize>>> {
    let mut parts = pattern.to_vec();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let mut remaining: Vec<usize> = targets.to_vec();
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        parts: &[usize],
        idx: usize,
        min_bin_for_same: usize,
        remaining: &mut Vec<usize>,
        assignment: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if idx == parts.len() {
            out.push(assignment.clone());
            return;
        }
        let part = parts[idx];
        let same_as_prev = idx > 0 && parts[idx - 1] == part;
        // For runs of equal parts, force non-decreasing bin indices so each
        // grouping is counted once.
        let start = if same_as_prev { min_bin_for_same } else { 0 };
        for bin in start..remaining.len() {
            if remaining[bin] >= part {
                remaining[bin] -= part;
                assignment[bin].push(part);
                recurse(parts, idx + 1, bin, remaining, assignment, out, limit);
                assignment[bin].pop();
                remaining[bin] += part;
            }
        }
    }
    recurse(
        &parts,
        0,
        0,
        &mut remaining,
        &mut assignment,
        &mut out,
        limit,
    );
    out
}

fn count_grouped_partitions(pattern: &[usize], targets: &[usize], limit: usize) -> usize {
    enumerate_grouped_partitions(pattern, targets, limit).len()
}

/// Attempts to split a squarefree rational polynomial into factors with
/// the prescribed degrees, returned as primitive integer polynomials with
/// positive leading coefficients whose product is proven (by exact
/// multiplication) to equal the primitive part of the input.
///
/// Method: factor modulo one good word-size prime (chosen to minimize the
/// modular factor count), lift the monic factorization past a
/// Landau–Mignotte bound, then recombine by subset search with exact trial
/// division. `None` means no split with these degrees was found; when some
/// reduction admits no grouping into the target degrees at all, the
/// degrees are provably wrong and `None` is returned immediately.
/// Irreducibility of the returned factors is not asserted here; callers
/// certify it separately.
pub fn split_by_degrees(
    a: &UniPoly,
    degrees: &[usize],
    seed: u64,
) -> Result<Option<Vec<UniPoly>>, FpError> {
    let n = match a.degree() {
        None | Some(0) => return Err(FpError::Constant),
        Some(n) => n,
    };
    if degrees.is_empty() || degrees.iter().sum::<usize>() != n {
        return Ok(None);
    }
    let (_, prim) = a.content_and_primitive();
    let a_prim = UniPoly::from_bigint_coeffs(prim.clone());
    if degrees.len() == 1 {
        return Ok(Some(vec![a_prim]));
    }
    let lead = prim.last().unwrap().clone();
    let dmax = *degrees.iter().max().unwrap();
    // Landau–Mignotte: an integer factor of degree d divides lc * 2^d *
    // ||a||_2 coefficientwise; the candidates below carry an extra factor
    // of the leading coefficient.
    let norm2_sq: BigInt = prim.iter().map(|c| c * c).sum();
    let bound: BigInt = (norm2_sq.sqrt() + 1) * binomial(dmax, dmax / 2) * lead.abs();

    // Pick an admissible prime with as few modular factors as possible.
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut admissible_seen = 0usize;
    for p in primes_from(101).take(600) {
        if modp::bigint_mod(&lead, p) == 0 {
            continue;
        }
        let reduced = match ModPoly::reduce(&a_prim, p) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if reduced.degree() != Some(n) || !reduced.is_squarefree() {
            continue;
        }
        let pattern = reduced.factor_degree_pattern()?;
        if enumerate_grouped_partitions(&pattern, degrees, 1).is_empty() {
            // No grouping exists: the prescribed degrees are impossible.
            return Ok(None);
        }
        admissible_seen += 1;
        let better = match &best {
            None => true,
            Some((_, b)) => pattern.len() < b.len(),
        };
        if better {
            best = Some((p, pattern));
        }
        if admissible_seen >= 25 {
            break;
        }
    }
    let (p, pattern) = match best {
        None => return Ok(None),
        Some(b) => b,
    };
    if pattern.len() > 24 {
        // Subset search would be too wide; give up honestly.
        return Ok(None);
    }

    let reduced = ModPoly::reduce(&a_prim, p)?;
    let modular_factors = reduced.monic().factor_squarefree(seed ^ p)?;
    let lifted = hensel_lift_monic(&prim, &modular_factors, p, &bound);

    // Recombine: peel the targets smallest-first, testing each candidate by
    // exact division of the remaining cofactor.
    let mut order: Vec<usize> = (0..degrees.len()).collect();
    order.sort_by_key(|&i| degrees[i]);
    let mut available: Vec<bool> = vec![true; lifted.factors.len()];
    let mut found: Vec<Option<UniPoly>> = vec![None; degrees.len()];
    let mut remainder = a_prim.clone();
    for &target_idx in &order {
        let target = degrees[target_idx];
        let candidate = find_subset_divisor(&lifted, &mut available, target, &lead, &remainder);
        match candidate {
            None => return Ok(None),
            Some(c) => {
                remainder = remainder
                    .exact_div(&c)
                    .expect("trial division already confirmed");
                let (_, cp) = remainder.content_and_primitive();
                remainder = UniPoly::from_bigint_coeffs(cp);
                found[target_idx] = Some(c);
            }
        }
    }
    let candidates: Vec<UniPoly> = found.into_iter().map(|c| c.unwrap()).collect();
    let mut product = UniPoly::one();
    for c in &candidates {
        product = product.mul(c);
    }
    let (_, pp) = product.content_and_primitive();
    if UniPoly::from_bigint_coeffs(pp) == a_prim {
        Ok(Some(candidates))
    } else {
        Ok(None)
    }
}

/// Monic factors of `f/lc(f)` lifted to a prime power past the bound.
struct LiftedFactorization {
    /// p^K
    modulus: BigInt,
    /// Monic factors over Z/p^K, coefficient vectors of length deg+1.
    factors: Vec<Vec<BigInt>>,
}

/// Linear multi-factor Hensel lifting of a monic squarefree factorization.
/// Input factors are monic mod p and pairwise coprime; output factors are
/// monic mod p^K with p^K > 2 * bound and their product congruent to
/// `prim / lc` mod p^K.
fn hensel_lift_monic(
    prim: &[BigInt],
    modular_factors: &[ModPoly],
    p: u64,
    bound: &BigInt,
) -> LiftedFactorization {
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound * 2 + 2 {
        modulus *= &pb;
    }

    // Bezout data mod p: s_i = (prod_{j != i} g_j)^{-1} mod g_i.
    let g_mod_p: Vec<Vec<u64>> = modular_factors.iter().map(|g| g.coeffs().to_vec()).collect();
    let mut bezout: Vec<Vec<u64>> = Vec::with_capacity(g_mod_p.len());
    for i in 0..g_mod_p.len() {
        let mut others = vec![1u64];
        for (j, g) in g_mod_p.iter().enumerate() {
            if j != i {
                others = modp::mul(&others, g, p);
            }
        }
        let inv = modp::inv_mod_poly(&others, &g_mod_p[i], p)
            .expect("modular factors are pairwise coprime");
        bezout.push(inv);
    }

    // Target: the monic image of prim over Z/p^K.
    let lead = prim.last().unwrap();
    let lead_inv_mod = invert_mod(lead, &modulus);
    let f_monic: Vec<BigInt> = prim
        .iter()
        .map(|c| mod_reduce(&(c * &lead_inv_mod), &modulus))
        .collect();

    let mut current: Vec<Vec<BigInt>> = g_mod_p
        .iter()
        .map(|g| g.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut pa = pb.clone(); // p^a, current precision
    while pa < modulus {
        // e = (f_monic - prod current) / p^a mod p
        let mut prod: Vec<BigInt> = vec![BigInt::one()];
        for g in &current {
            prod = bigint_poly_mul_mod(&prod, g, &modulus);
        }
        let mut err: Vec<BigInt> = Vec::with_capacity(f_monic.len());
        for i in 0..f_monic.len() {
            let a = f_monic.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = prod.get(i).cloned().unwrap_or_else(BigInt::zero);
            err.push(mod_reduce(&(a - b), &modulus));
        }
        let e_over_pa: Vec<u64> = err
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&pa);
                debug_assert!(r.is_zero(), "error must be divisible by p^a");
                modp::bigint_mod(&q, p)
            })
            .collect();
        let mut e_mod: Vec<u64> = e_over_pa;
        modp::trim(&mut e_mod);
        if e_mod.is_empty() {
            pa *= &pb;
            continue;
        }
        for (i, g) in current.iter_mut().enumerate() {
            // delta_i = e * s_i mod g_i (mod p)
            let prod_es = modp::mul(&e_mod, &bezout[i], p);
            let delta = modp::rem(&prod_es, &g_mod_p[i], p);
            for (k, &dc) in delta.iter().enumerate() {
                if dc != 0 {
                    g[k] = mod_reduce(&(&g[k] + &pa * BigInt::from(dc)), &modulus);
                }
            }
        }
        pa *= &pb;
    }

    LiftedFactorization {
        modulus,
        factors: current,
    }
}

/// Searches subsets of the available lifted factors whose degrees sum to
/// `target` and whose lc-corrected symmetric lift divides `remainder`
/// exactly. Marks the used factors unavailable on success.
fn find_subset_divisor(
    lifted: &LiftedFactorization,
    available: &mut [bool],
    target: usize,
    lead: &BigInt,
    remainder: &UniPoly,
) -> Option<UniPoly> {
    let idxs: Vec<usize> = (0..lifted.factors.len()).filter(|&i| available[i]).collect();
    let degrees: Vec<usize> = idxs
        .iter()
        .map(|&i| lifted.factors[i].len() - 1)
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    fn dfs(
        pos: usize,
        remaining: usize,
        idxs: &[usize],
        degrees: &[usize],
        chosen: &mut Vec<usize>,
        lifted: &LiftedFactorization,
        lead: &BigInt,
        remainder: &UniPoly,
    ) -> Option<UniPoly> {
        if remaining == 0 {
            // Candidate: lead * prod of chosen factors, symmetric lift.
            let mut prod: Vec<BigInt> = vec![mod_reduce(lead, &lifted.modulus)];
            for &c in chosen.iter() {
                prod = bigint_poly_mul_mod(&prod, &lifted.factors[c], &lifted.modulus);
            }
            let coeffs: Vec<BigInt> = prod
                .iter()
                .map(|r| modp::symmetric_lift(r, &lifted.modulus))
                .collect();
            let candidate = UniPoly::from_bigint_coeffs(coeffs);
            let (_, cp) = candidate.content_and_primitive();
            let candidate = UniPoly::from_bigint_coeffs(cp);
            match remainder.divrem(&candidate) {
                Ok((_, r)) if r.is_zero() => return Some(candidate),
                _ => return None,
            }
        }
        if pos >= idxs.len() {
            return None;
        }
        // Prune: remaining degree must be coverable.
        let rest: usize = degrees[pos..].iter().sum();
        if rest < remaining {
            return None;
        }
        if degrees[pos] <= remaining {
            chosen.push(idxs[pos]);
            if let Some(hit) = dfs(
                pos + 1,
                remaining - degrees[pos],
                idxs,
                degrees,
                chosen,
                lifted,
                lead,
                remainder,
            ) {
                return Some(hit);
            }
            chosen.pop();
        }
        dfs(pos + 1, remaining, idxs, degrees, chosen, lifted, lead, remainder)
    }
    let hit = dfs(
        0,
        target,
        &idxs,
        &degrees,
        &mut chosen,
        lifted,
        lead,
        remainder,
    )?;
    for &c in &chosen {
        available[c] = false;
    }
    Some(hit)
}

fn mod_reduce(v: &BigInt, m: &BigInt) -> BigInt {
    let r = v % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

fn invert_mod(v: &BigInt, m: &BigInt) -> BigInt {
    // Extended Euclid; v must be invertible mod m.
    let (mut r0, mut r1) = (m.clone(), mod_reduce(v, m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    debug_assert!(r0.is_one(), "not invertible");
    mod_reduce(&t0, m)
}

fn bigint_poly_mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] = mod_reduce(&(&out[i + j] + ai * bj), m);
            }
        }
    }
    while out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_int_coeffs(coeffs)
    }

    #[test]
    fn reduce_x2_minus_1_mod_3() {
        let f = ModPoly::reduce(&poly(&[-1, 0, 1]), 3).unwrap();
        assert_eq!(f.coeffs(), &[2, 0, 1]);
    }

    #[test]
    fn reduce_rejects_bad_denominator() {
        let half_x = UniPoly::from_coeffs(vec![
            num_rational::BigRational::new(0.into(), 1.into()),
            num_rational::BigRational::new(1.into(), 2.into()),
        ]);
        assert_eq!(
            ModPoly::reduce(&half_x, 2),
            Err(FpError::BadPrime { prime: 2 })
        );
        assert!(ModPoly::reduce(&half_x, 3).is_ok());
    }

    #[test]
    fn pattern_of_x2_plus_1_mod_3() {
        let f = ModPoly::reduce(&poly(&[1, 0, 1]), 3).unwrap();
        assert_eq!(f.factor_degree_pattern().unwrap(), vec![2]);
    }

    #[test]
    fn pattern_of_split_quadratic_mod_5() {
        // X(X-1) mod 5
        let f = ModPoly::reduce(&poly(&[0, -1, 1]), 5).unwrap();
        assert_eq!(f.factor_degree_pattern().unwrap(), vec![1, 1]);
    }

    #[test]
    fn pattern_rejects_non_squarefree() {
        let f = ModPoly::reduce(&poly(&[1, 2, 1]), 5).unwrap(); // (x+1)^2
        assert_eq!(
            f.factor_degree_pattern(),
            Err(FpError::NotSquarefree { prime: 5 })
        );
    }

    #[test]
    fn factor_product_reproduces_input() {
        // (x^2+1)(x+2)(x+3) mod 7, squarefree
        let f = poly(&[1, 0, 1]).mul(&poly(&[2, 1])).mul(&poly(&[3, 1]));
        let fp = ModPoly::reduce(&f, 7).unwrap();
        let factors = fp.factor_squarefree(1).unwrap();
        let mut prod = ModPoly::from_coeffs(7, vec![1]).unwrap();
        for g in &factors {
            prod = prod.mul(g);
        }
        assert_eq!(prod, fp.monic());
        let degs: Vec<usize> = factors.iter().map(|g| g.degree().unwrap()).collect();
        assert_eq!(degs.iter().sum::<usize>(), 4);
    }

    #[test]
    fn certificate_for_x2_plus_1_is_prime_3() {
        let cert = irreducibility_certificate(&poly(&[1, 0, 1]), 50)
            .unwrap()
            .unwrap();
        assert_eq!(cert, IrreducibilityCertificate::SinglePrime { prime: 3 });
    }

    #[test]
    fn no_certificate_for_reducible_poly() {
        let cert = irreducibility_certificate(&poly(&[-1, 0, 1]), 60).unwrap();
        assert_eq!(cert, None);
    }

    #[test]
    fn never_certifies_polys_with_rational_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let root: i64 = rng.random_range(-10..=10);
            let d = rng.random_range(1..5);
            let mut g: Vec<i64> = (0..d).map(|_| rng.random_range(-9..10)).collect();
            g.push(1);
            let f = poly(&[-root, 1]).mul(&poly(&g));
            if f.degree() == Some(1) {
                continue;
            }
            assert_eq!(irreducibility_certificate(&f, 40).unwrap(), None, "f = {f}");
        }
    }

    #[test]
    fn x4_plus_1_needs_the_recombination_certificate() {
        // X^4 + 1 is irreducible over Q but reducible mod every prime, and
        // the divisor degree 2 survives every pattern; only the complete
        // recombination search can certify it.
        let cert = irreducibility_certificate(&poly(&[1, 0, 0, 0, 1]), 80)
            .unwrap()
            .unwrap();
        assert!(
            matches!(cert, IrreducibilityCertificate::RecombinationExhaustion { .. }),
            "{cert:?}"
        );
    }

    #[test]
    fn subset_sums_and_intersection() {
        let s = subset_degree_sums(&[1, 22, 77]);
        assert_eq!(
            s.into_iter().collect::<Vec<_>>(),
            vec![0, 1, 22, 23, 77, 78, 99, 100]
        );
        let both = divisor_degree_intersection(&[vec![1, 22, 77], vec![100]]);
        assert_eq!(both.into_iter().collect::<Vec<_>>(), vec![0, 100]);
    }

    #[test]
    fn refinement_check() {
        assert!(pattern_refines(&[1, 2, 20, 77], &[1, 22, 77]));
        assert!(pattern_refines(&[100], &[100]));
        assert!(!pattern_refines(&[4, 96], &[1, 22, 77]));
    }

    #[test]
    fn split_recovers_known_factors() {
        // Monic squarefree product with distinct degrees 2, 3.
        let f2 = poly(&[3, -1, 1]);
        let f3 = poly(&[-7, 0, 2, 1]);
        let prod = f2.mul(&f3);
        let split = split_by_degrees(&prod, &[2, 3], 5).unwrap().unwrap();
        assert_eq!(split, vec![f2, f3]);
    }

    #[test]
    fn split_returns_none_for_wrong_degrees() {
        let f2 = poly(&[3, -1, 1]);
        let f3 = poly(&[-7, 0, 2, 1]);
        let prod = f2.mul(&f3);
        assert_eq!(split_by_degrees(&prod, &[1, 4], 5).unwrap(), None);
    }

    #[test]
    fn grouped_partition_counting() {
        assert_eq!(count_grouped_partitions(&[10, 16, 20], &[10, 16, 20], 2), 1);
        // 10 = 5+5 and 20 = 5+5+10 both possible: ambiguous.
        assert_eq!(
            count_grouped_partitions(&[5, 5, 5, 5, 10, 16], &[10, 16, 20], 2),
            2
        );
        assert_eq!(count_grouped_partitions(&[7, 9], &[10, 6], 2), 0);
    }
}
