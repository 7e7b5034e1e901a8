//! Crate-internal dense polynomial arithmetic over prime fields, plus
//! BigInt reduction and CRT reconstruction helpers. Coefficient vectors are
//! little-endian (index = exponent) with no trailing zeros.

use crate::primes::{invmod, mulmod, submod};
use num_bigint::BigInt;
use num_traits::Signed;

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn lc(v: &[u64]) -> u64 {
    *v.last().expect("nonzero polynomial")
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let idx = i + j;
            out[idx] = (out[idx] as u128 + ai as u128 * bj as u128).rem_euclid(p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + y) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = submod(x, y, p);
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo nonzero `b`.
pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = deg(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    let inv_lb = invmod(lc(b), p);
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let factor = mulmod(r[dr], inv_lb, p);
        let shift = dr - db;
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                r[j + shift] = submod(r[j + shift], mulmod(factor, bj, p), p);
            }
        }
        // The leading term cancels exactly.
        r[dr] = 0;
        trim(&mut r);
    }
    r
}

pub(crate) fn make_monic(v: &mut [u64], p: u64) {
    if v.is_empty() {
        return;
    }
    let inv = invmod(lc(v), p);
    if inv == 1 {
        return;
    }
    for c in v.iter_mut() {
        *c = mulmod(*c, inv, p);
    }
}

/// Monic gcd mod p.
pub(crate) fn gcd_monic(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

/// Inverse of `a` modulo `g` (both mod p), when gcd(a, g) = 1.
pub(crate) fn inv_mod_poly(a: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
    // Extended Euclid on (g, a mod g), tracking the cofactor of a.
    let mut r0 = g.to_vec();
    let mut r1 = rem(a, g, p);
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r2) = divrem(&r0, &r1, p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if deg(&r0) != Some(0) {
        return None;
    }
    let scale = invmod(r0[0], p);
    Some(t0.iter().map(|&c| mulmod(c, scale, p)).collect())
}

/// Quotient and remainder mod p.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = deg(b).expect("division by zero polynomial");
    let inv_lb = invmod(lc(b), p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let factor = mulmod(r[dr], inv_lb, p);
        let shift = dr - db;
        q[shift] = factor;
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                r[j + shift] = submod(r[j + shift], mulmod(factor, bj, p), p);
            }
        }
        r[dr] = 0;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (i, &c) in a.iter().enumerate().skip(1) {
        out.push(mulmod(c, (i as u64) % p, p));
    }
    trim(&mut out);
    out
}

/// `n mod p` mapped to `[0, p)`, via limb-wise Horner reduction.
pub(crate) fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let (sign, digits) = n.to_u64_digits();
    let r = ((u64::MAX % p) as u128 + 1) % p as u128; // 2^64 mod p
    let mut acc: u128 = 0;
    for &d in digits.iter().rev() {
        acc = (acc * r + d as u128) % p as u128;
    }
    let m = acc as u64;
    match sign {
        num_bigint::Sign::Minus if m != 0 => p - m,
        _ => m,
    }
}

/// Reduces integer coefficients mod p.
pub(crate) fn reduce_bigint_poly(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = coeffs.iter().map(|c| bigint_mod(c, p)).collect();
    trim(&mut out);
    out
}

/// One CRT step: given `r mod m` (0 <= r < m) and `s mod p`, returns the
/// unique residue mod `m*p` congruent to both, in `[0, m*p)`.
pub(crate) fn crt_step(r: &BigInt, m: &BigInt, s: u64, p: u64) -> BigInt {
    let r_mod_p = bigint_mod(r, p);
    let m_mod_p = bigint_mod(m, p);
    let diff = submod(s, r_mod_p, p);
    let k = mulmod(diff, invmod(m_mod_p, p), p);
    r + m * BigInt::from(k)
}

/// Maps a residue in `[0, m)` to the symmetric range `(-m/2, m/2]`.
pub(crate) fn symmetric_lift(r: &BigInt, m: &BigInt) -> BigInt {
    debug_assert!(!r.is_negative() && r < m);
    if r * 2 > *m {
        r - m
    } else {
        r.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rem_and_gcd_mod_small_prime() {
        let p = 17;
        // (x^2 - 1) and (x - 1) share the factor x - 1.
        let a = vec![p - 1, 0, 1];
        let b = vec![p - 1, 1];
        assert!(rem(&a, &b, p).is_empty());
        assert_eq!(gcd_monic(&a, &b, p), vec![p - 1, 1]);
    }

    #[test]
    fn bigint_reduction_matches_direct() {
        let p = 1_000_000_007u64;
        let n = BigInt::parse_bytes(b"-123456789012345678901234567890", 10).unwrap();
        let direct = ((&n % p) + p) % p;
        assert_eq!(BigInt::from(bigint_mod(&n, p)), direct);
    }

    #[test]
    fn crt_reconstructs_small_value() {
        use num_traits::{One, Zero};
        let target = BigInt::from(-123456789i64);
        let mut m = BigInt::one();
        let mut r = BigInt::zero();
        for p in [1_000_003u64, 1_000_033, 1_000_037] {
            let s = bigint_mod(&target, p);
            r = crt_step(&r, &m, s, p);
            m *= p;
        }
        assert_eq!(symmetric_lift(&r, &m), target);
    }
}
