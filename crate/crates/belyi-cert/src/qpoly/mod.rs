//! Exact arithmetic for univariate polynomials with arbitrary-precision
//! rational coefficients: ring operations, modular gcd, Yun squarefree
//! decomposition, and (in [`disc`]) modular resultants and discriminants.

mod disc;

pub use disc::{
    discriminant, discriminant_at, is_rational_square, resultant, same_squarefree_part,
    squarefree_part, DiscError,
};

use crate::modp;
use crate::primes::primes_from;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division left a nonzero remainder")]
    InexactDivision,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
}

/// Dense univariate polynomial over Q; `coeffs[i]` is the coefficient of
/// `X^i`, with no trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigRational::one())
    }

    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn from_bigint_coeffs(coeffs: Vec<BigInt>) -> Self {
        UniPoly::from_coeffs(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        UniPoly::from_coeffs(out)
    }

    pub fn evaluate_at(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Quotient and remainder of exact division over Q.
    pub fn divrem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        let lead = divisor.leading_coeff();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let dr = rem.len() - 1;
            let factor = rem[dr].clone() / lead.clone();
            if !factor.is_zero() {
                let shift = dr - dd;
                quot[shift] = factor.clone();
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    if !b.is_zero() {
                        rem[j + shift] -= &factor * b;
                    }
                }
            }
            rem.pop();
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly, PolyError> {
        let (q, r) = self.divrem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    /// Same polynomial scaled monic; the zero polynomial stays zero.
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = BigRational::one() / self.leading_coeff();
        self.scale(&inv)
    }

    /// Writes `self = content * primitive` where `primitive` has coprime
    /// integer coefficients and positive leading coefficient. The zero
    /// polynomial yields content 0 and an empty coefficient list.
    pub fn content_and_primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, den_lcm), prim)
    }

    /// Monic greatest common divisor, computed by a modular (Brown-style)
    /// algorithm with exact trial-division confirmation.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (_, fa) = self.content_and_primitive();
        let (_, fb) = other.content_and_primitive();
        if fa.len() == 1 || fb.len() == 1 {
            return UniPoly::one();
        }
        let la = fa.last().unwrap().clone();
        let lb = fb.last().unwrap().clone();
        let lead_gcd = la.gcd(&lb);
        let mut best_deg = (fa.len() - 1).min(fb.len() - 1);
        let mut modulus = BigInt::one();
        let mut residues: Vec<BigInt> = Vec::new();
        let mut last_candidate: Option<Vec<BigInt>> = None;

        for p in primes_from(1 << 62) {
            if modp::bigint_mod(&la, p) == 0 || modp::bigint_mod(&lb, p) == 0 {
                continue;
            }
            let ap = modp::reduce_bigint_poly(&fa, p);
            let bp = modp::reduce_bigint_poly(&fb, p);
            let mut gp = modp::gcd_monic(&ap, &bp, p);
            let dg = match modp::deg(&gp) {
                None => continue, // cannot happen for nonzero inputs
                Some(0) => return UniPoly::one(),
                Some(d) => d,
            };
            if dg > best_deg {
                continue; // unlucky prime
            }
            if dg < best_deg {
                best_deg = dg;
                modulus = BigInt::one();
                residues.clear();
                last_candidate = None;
            }
            let scale = modp::bigint_mod(&lead_gcd, p);
            for c in gp.iter_mut() {
                *c = crate::primes::mulmod(*c, scale, p);
            }
            if residues.is_empty() {
                residues = gp.iter().map(|&c| BigInt::from(c)).collect();
                modulus = BigInt::from(p);
            } else {
                for (r, &s) in residues.iter_mut().zip(gp.iter()) {
                    *r = modp::crt_step(r, &modulus, s, p);
                }
                modulus *= p;
            }
            let candidate: Vec<BigInt> = residues
                .iter()
                .map(|r| modp::symmetric_lift(r, &modulus))
                .collect();
            if last_candidate.as_ref() == Some(&candidate) {
                let cand_poly = UniPoly::from_bigint_coeffs(candidate.clone());
                let (_, prim) = cand_poly.content_and_primitive();
                let prim_poly = UniPoly::from_bigint_coeffs(prim);
                if self.divrem(&prim_poly).map(|(_, r)| r.is_zero()) == Ok(true)
                    && other.divrem(&prim_poly).map(|(_, r)| r.is_zero()) == Ok(true)
                {
                    return prim_poly.monic();
                }
            }
            last_candidate = Some(candidate);
        }
        unreachable!("prime stream is infinite")
    }

    /// Yun's squarefree decomposition: returns `(multiplicity, monic part)`
    /// pairs with `self = lc * prod part^multiplicity`, multiplicities
    /// ascending, parts pairwise coprime and squarefree.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(u32, UniPoly)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f = self.monic();
        if f.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let fp = f.derivative();
        let u = f.gcd(&fp);
        let mut out = Vec::new();
        if u.degree() == Some(0) {
            return Ok(vec![(1, f)]);
        }
        let mut v = f.exact_div(&u)?;
        let mut w = fp.exact_div(&u)?;
        let mut i = 1u32;
        while v.degree().map(|d| d > 0).unwrap_or(false) {
            let z = w.sub(&v.derivative());
            let g = v.gcd(&z);
            if g.degree().map(|d| d > 0).unwrap_or(false) {
                out.push((i, g.clone()));
            }
            v = v.exact_div(&g)?;
            w = z.exact_div(&g)?;
            i += 1;
        }
        Ok(out)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*X")?,
                _ => write!(f, "{c}*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// A polynomial kept in factored form: `constant * prod base^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPoly {
    pub constant: BigRational,
    pub factors: Vec<(UniPoly, u32)>,
}

impl FactoredPoly {
    pub fn new(constant: BigRational, factors: Vec<(UniPoly, u32)>) -> Self {
        FactoredPoly { constant, factors }
    }

    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.constant.clone());
        for (base, e) in &self.factors {
            acc = acc.mul(&base.pow(*e));
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(b, e)| b.degree().unwrap_or(0) * *e as usize)
            .sum()
    }

    /// Checks that the bases are pairwise coprime (gcd has degree 0).
    pub fn bases_pairwise_coprime(&self) -> bool {
        for i in 0..self.factors.len() {
            for j in i + 1..self.factors.len() {
                let g = self.factors[i].0.gcd(&self.factors[j].0);
                if g.degree() != Some(0) {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses a rational from `a` or `a/b` text.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (num_s, den_s) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::parse_bytes(num_s.as_bytes(), 10)
        .ok_or_else(|| format!("bad integer '{num_s}'"))?;
    let den = BigInt::parse_bytes(den_s.as_bytes(), 10)
        .ok_or_else(|| format!("bad integer '{den_s}'"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_int_coeffs(coeffs)
    }

    #[test]
    fn derivative_of_x_to_five() {
        let f = poly(&[0, 0, 0, 0, 0, 1]);
        assert_eq!(f.derivative(), poly(&[0, 0, 0, 0, 5]));
    }

    #[test]
    fn divrem_exact_and_inexact() {
        let f = poly(&[-1, 0, 1]); // x^2 - 1
        let g = poly(&[-1, 1]); // x - 1
        let (q, r) = f.divrem(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, poly(&[1, 1]));
        assert!(poly(&[1, 1, 1]).exact_div(&g).is_err());
    }

    #[test]
    fn gcd_with_zero_is_monic_other() {
        let f = poly(&[2, 4]); // 4x + 2
        assert_eq!(f.gcd(&UniPoly::zero()), f.monic());
        assert_eq!(UniPoly::zero().gcd(&f), f.monic());
    }

    #[test]
    fn gcd_of_x2_minus_1_and_x_minus_1() {
        let f = poly(&[-1, 0, 1]);
        let g = poly(&[-1, 1]);
        assert_eq!(f.gcd(&g), poly(&[-1, 1]));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let f = poly(&[1, 0, 1]);
        let g = poly(&[-1, 1]);
        assert_eq!(f.gcd(&g), UniPoly::one());
    }

    #[test]
    fn gcd_with_large_cofactors() {
        // (x^3 + 2x + 7) * common vs (x^4 - 5) * common
        let common = poly(&[3, 0, -1, 2]); // 2x^3 - x^2 + 3
        let f = poly(&[7, 2, 0, 1]).mul(&common);
        let g = poly(&[-5, 0, 0, 0, 1]).mul(&common);
        assert_eq!(f.gcd(&g), common.monic());
    }

    #[test]
    fn squarefree_of_x_cubed() {
        let f = poly(&[0, 0, 0, 1]);
        let parts = f.squarefree_decomposition().unwrap();
        assert_eq!(parts, vec![(3, poly(&[0, 1]))]);
    }

    #[test]
    fn squarefree_reconstructs_input() {
        // f = (x-1)^1 (x+2)^2 (x^2+1)^3, scaled by 6
        let f = poly(&[-1, 1])
            .mul(&poly(&[2, 1]).pow(2))
            .mul(&poly(&[1, 0, 1]).pow(3))
            .scale(&big(6));
        let parts = f.squarefree_decomposition().unwrap();
        let mut back = UniPoly::constant(f.leading_coeff());
        for (m, part) in &parts {
            back = back.mul(&part.pow(*m));
        }
        assert_eq!(back, f);
        let mults: Vec<u32> = parts.iter().map(|&(m, _)| m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn content_and_primitive_signs() {
        let f = poly(&[2, 0, -4]).scale(&BigRational::new(BigInt::from(1), BigInt::from(6)));
        let (content, prim) = f.content_and_primitive();
        // -4/6 x^2 + 2/6 = -(1/3)(2x^2 - 1)
        assert_eq!(content, BigRational::new(BigInt::from(-1), BigInt::from(3)));
        assert_eq!(prim, vec![BigInt::from(-1), BigInt::from(0), BigInt::from(2)]);
        assert!(prim.last().unwrap() > &BigInt::from(0));
    }

    #[test]
    fn factored_expand_and_coprime_check() {
        let f = FactoredPoly::new(big(1), vec![(poly(&[-1, 1]), 1)]);
        assert_eq!(f.expand(), poly(&[-1, 1]));
        let g = FactoredPoly::new(big(3), vec![(poly(&[1, 1]), 3)]);
        assert_eq!(g.expand(), poly(&[3, 9, 9, 3]));
        assert!(g.bases_pairwise_coprime());
        let h = FactoredPoly::new(
            big(1),
            vec![(poly(&[-1, 0, 1]), 1), (poly(&[-1, 1]), 1)],
        );
        assert!(!h.bases_pairwise_coprime());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-5/3").unwrap(), BigRational::new(BigInt::from(-5), BigInt::from(3)));
        assert_eq!(parse_rational("7").unwrap(), big(7));
        assert!(parse_rational("1/0").is_err());
    }
}
