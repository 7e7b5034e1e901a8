//! Resultants and discriminants of exact rational polynomials, computed by
//! modular residues at word-size primes with CRT reconstruction under a
//! Hadamard bound, plus rational square / squarefree-part tests.
//!
//! Conventions, used everywhere:
//! `disc(f) = (-1)^(n(n-1)/2) * res(f, f') / lc(f)` for `n = deg f`.

use super::UniPoly;
use crate::modp;
use crate::primes::{factor_u64, mulmod, powmod, primes_from};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscError {
    #[error("polynomial degree dropped to {found} (expected {expected}) at the sample point")]
    DegreeDrop { expected: usize, found: usize },
    #[error("operation requires a nonzero input")]
    ZeroInput,
    #[error("operation requires degree >= 1")]
    ConstantPolynomial,
    #[error("integer factorization budget exceeded")]
    FactorBudget,
}

/// Exact resultant of two nonzero rational polynomials.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Result<BigRational, DiscError> {
    let n = f.degree().ok_or(DiscError::ZeroInput)?;
    let m = g.degree().ok_or(DiscError::ZeroInput)?;
    if n == 0 && m == 0 {
        return Ok(BigRational::one());
    }
    if n == 0 {
        return Ok(f.leading_coeff().pow(m as i32));
    }
    if m == 0 {
        return Ok(g.leading_coeff().pow(n as i32));
    }
    let (cf, fi) = f.content_and_primitive();
    let (cg, gi) = g.content_and_primitive();
    let r = resultant_int(&fi, &gi);
    Ok(cf.pow(m as i32) * cg.pow(n as i32) * BigRational::from_integer(r))
}

/// Exact discriminant of a rational polynomial of degree >= 1.
pub fn discriminant(f: &UniPoly) -> Result<BigRational, DiscError> {
    let n = f.degree().ok_or(DiscError::ZeroInput)?;
    if n == 0 {
        return Err(DiscError::ConstantPolynomial);
    }
    if n == 1 {
        return Ok(BigRational::one());
    }
    let (content, fi) = f.content_and_primitive();
    let deriv: Vec<BigInt> = fi
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant_int(&fi, &trimmed(deriv));
    let lc = fi.last().expect("nonzero").clone();
    let quot = exact_bigint_div(&res, &lc);
    let sign = if (n * (n - 1) / 2) % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    Ok(content.pow(2 * n as i32 - 2) * BigRational::from_integer(sign * quot))
}

/// Exact discriminant of the specialization `p - t0*q`. The degree must not
/// drop below `max(deg p, deg q)`.
pub fn discriminant_at(
    p: &UniPoly,
    q: &UniPoly,
    t0: &BigRational,
) -> Result<BigRational, DiscError> {
    let expected = p
        .degree()
        .unwrap_or(0)
        .max(q.degree().unwrap_or(0));
    let h = p.sub(&q.scale(t0));
    let found = h.degree().unwrap_or(0);
    if found != expected {
        return Err(DiscError::DegreeDrop { expected, found });
    }
    discriminant(&h)
}

fn trimmed(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn exact_bigint_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "expected exact integer division");
    q
}

/// Resultant of two nonzero integer polynomials via CRT over word-size
/// primes. Primes dividing either leading coefficient are skipped so the
/// degrees never drop modulo p.
fn resultant_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert!(!a.is_empty() && !b.is_empty());
    if a.len() == 1 {
        return a[0].pow(0u32); // constant vs anything handled by caller
    }
    // Hadamard-style bound: |res| <= ||a||_2^deg(b) * ||b||_2^deg(a).
    let norm2 = |v: &[BigInt]| -> BigInt { v.iter().map(|c| c * c).sum() };
    let bound_sq = norm2(a).pow((b.len() - 1) as u32) * norm2(b).pow((a.len() - 1) as u32);
    let bound = bound_sq.sqrt() + 1;
    let la = a.last().unwrap();
    let lb = b.last().unwrap();

    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    for p in primes_from(1 << 62) {
        if modp::bigint_mod(la, p) == 0 || modp::bigint_mod(lb, p) == 0 {
            continue;
        }
        let ap = modp::reduce_bigint_poly(a, p);
        let bp = modp::reduce_bigint_poly(b, p);
        let rp = resultant_mod(&ap, &bp, p);
        residue = if modulus.is_one() {
            modulus = BigInt::from(p);
            BigInt::from(rp)
        } else {
            let r = modp::crt_step(&residue, &modulus, rp, p);
            modulus *= p;
            r
        };
        if modulus > &bound * 2 + 2 {
            return modp::symmetric_lift(&residue, &modulus);
        }
    }
    unreachable!("prime stream is infinite")
}

/// Euclidean resultant mod p. Inputs must be nonzero with true degrees.
fn resultant_mod(a: &[u64], b: &[u64], p: u64) -> u64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let mut res = 1u64;
    loop {
        let n = modp::deg(&a).expect("nonzero");
        let m = match modp::deg(&b) {
            None => return 0,
            Some(0) => {
                return mulmod(res, powmod(b[0], n as u64, p), p);
            }
            Some(m) => m,
        };
        let r = modp::rem(&a, &b, p);
        let dr = modp::deg(&r).map(|d| d as u64);
        let drop = n as u64 - dr.unwrap_or(0);
        res = mulmod(res, powmod(modp::lc(&b), drop, p), p);
        if (n * m) % 2 == 1 {
            res = p - res;
            if res == p {
                res = 0;
            }
        }
        if r.is_empty() {
            return 0;
        }
        a = b;
        b = r;
    }
}

/// True iff `v` is the square of a rational (0 counts as a square).
pub fn is_rational_square(v: &BigRational) -> bool {
    if v.is_zero() {
        return true;
    }
    if v.is_negative() {
        return false;
    }
    let num = v.numer();
    let den = v.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    &sn * &sn == *num && &sd * &sd == *den
}

/// True iff nonzero `a` and `b` have the same signed squarefree part,
/// decided without factoring: this holds exactly when `a * b` is a
/// (positive) rational square.
pub fn same_squarefree_part(a: &BigRational, b: &BigRational) -> Result<bool, DiscError> {
    if a.is_zero() || b.is_zero() {
        return Err(DiscError::ZeroInput);
    }
    Ok(is_rational_square(&(a * b)))
}

/// Signed squarefree part of a nonzero rational: the product of the primes
/// dividing numerator or denominator to odd multiplicity, with the sign of
/// the input. Requires factoring the (reduced) numerator and denominator.
pub fn squarefree_part(v: &BigRational) -> Result<BigRational, DiscError> {
    if v.is_zero() {
        return Err(DiscError::ZeroInput);
    }
    let num_part = odd_multiplicity_product(&v.numer().magnitude().clone())?;
    let den_part = odd_multiplicity_product(&v.denom().magnitude().clone())?;
    let signed = if v.is_negative() { -num_part } else { num_part };
    Ok(BigRational::new(signed, den_part.into()))
}

fn odd_multiplicity_product(n: &BigUint) -> Result<BigInt, DiscError> {
    let factors = factor_biguint(n)?;
    let mut out = BigUint::one();
    for (p, e) in factors {
        if e % 2 == 1 {
            out *= p;
        }
    }
    Ok(BigInt::from_biguint(Sign::Plus, out))
}

/// Factors a positive integer: trial division, u64 kernels, perfect-power
/// reduction, then a bounded big-integer Pollard rho.
fn factor_biguint(n: &BigUint) -> Result<Vec<(BigUint, u32)>, DiscError> {
    let mut remaining = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, k: u32, out: &mut Vec<(BigUint, u32)>| {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += k,
            None => out.push((p, k)),
        }
    };
    for p in primes_from(2).take_while(|&p| p < 10_000) {
        let pb = BigUint::from(p);
        while (&remaining % &pb).is_zero() {
            remaining /= &pb;
            push(pb.clone(), 1, &mut out);
        }
        if remaining.is_one() {
            break;
        }
    }
    let mut stack = vec![(remaining, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factor_u64(small) {
                push(BigUint::from(p), e * mult, &mut out);
            }
            continue;
        }
        if is_probable_prime(&m) {
            push(m, mult, &mut out);
            continue;
        }
        // Perfect powers first: they are common for near-square inputs.
        let s = m.sqrt();
        if &s * &s == m {
            stack.push((s, mult * 2));
            continue;
        }
        let d = pollard_rho_big(&m).ok_or(DiscError::FactorBudget)?;
        stack.push((&m / &d, mult));
        stack.push((d, mult));
    }
    out.sort();
    Ok(out)
}

/// Miller–Rabin on big integers with fixed small-prime bases plus extra
/// power-of-two bases; adequate for the certificate use here.
fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut r = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        r += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 61, 73, 1662803] {
        let ab = BigUint::from(a) % n;
        if ab.is_zero() {
            continue;
        }
        let mut x = ab.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..r.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_big(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..24 {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        for _ in 0..2_000_000u64 {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            let d = diff.gcd(n);
            if d > one && &d < n {
                return Some(d);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::big;

    fn poly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_int_coeffs(coeffs)
    }

    /// Independent oracle: resultant as the Sylvester determinant, computed
    /// by fraction-free (Bareiss) elimination over the integers.
    fn resultant_sylvester(f: &UniPoly, g: &UniPoly) -> BigRational {
        let n = f.degree().unwrap();
        let m = g.degree().unwrap();
        if n == 0 {
            return f.leading_coeff().pow(m as i32);
        }
        if m == 0 {
            return g.leading_coeff().pow(n as i32);
        }
        let size = n + m;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        for row in 0..m {
            for i in 0..=n {
                mat[row][row + n - i] = f.coeff(i);
            }
        }
        for row in 0..n {
            for i in 0..=m {
                mat[m + row][row + m - i] = g.coeff(i);
            }
        }
        // Plain rational Gaussian elimination is an adequate oracle here.
        let mut det = BigRational::one();
        for col in 0..size {
            let pivot_row = (col..size).find(|&r| !mat[r][col].is_zero());
            let pr = match pivot_row {
                None => return BigRational::zero(),
                Some(r) => r,
            };
            if pr != col {
                mat.swap(pr, col);
                det = -det;
            }
            let pivot = mat[col][col].clone();
            det *= pivot.clone();
            for r in col + 1..size {
                let factor = mat[r][col].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..size {
                    let sub = factor.clone() * mat[col][c].clone();
                    mat[r][c] -= sub;
                }
            }
        }
        det
    }

    fn disc_oracle(f: &UniPoly) -> BigRational {
        let n = f.degree().unwrap();
        let r = resultant_sylvester(f, &f.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        big(sign) * r / f.leading_coeff()
    }

    #[test]
    fn quadratic_discriminants() {
        // disc(x^2 + bx + c) = b^2 - 4c
        assert_eq!(discriminant(&poly(&[1, 0, 1])).unwrap(), big(-4));
        assert_eq!(discriminant(&poly(&[-1, 0, 1])).unwrap(), big(4));
        assert_eq!(discriminant(&poly(&[2, 3, 1])).unwrap(), big(1));
    }

    #[test]
    fn cubic_discriminant_from_roots() {
        // (x-1)(x-2)(x-3): disc = prod of squared root differences = 4.
        let f = poly(&[-1, 1]).mul(&poly(&[-2, 1])).mul(&poly(&[-3, 1]));
        assert_eq!(discriminant(&f).unwrap(), big(4));
    }

    #[test]
    fn repeated_root_gives_zero_discriminant() {
        let f = poly(&[1, 2, 1]); // (x+1)^2
        assert_eq!(discriminant(&f).unwrap(), big(0));
    }

    #[test]
    fn resultant_matches_sylvester_oracle_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let df = rng.random_range(1..=8);
            let dg = rng.random_range(1..=8);
            let f = UniPoly::from_coeffs(
                (0..=df)
                    .map(|i| {
                        let c: i64 = if i == df {
                            rng.random_range(1..10)
                        } else {
                            rng.random_range(-9..10)
                        };
                        big(c)
                    })
                    .collect(),
            );
            let g = UniPoly::from_coeffs(
                (0..=dg)
                    .map(|i| {
                        let c: i64 = if i == dg {
                            rng.random_range(1..10)
                        } else {
                            rng.random_range(-9..10)
                        };
                        big(c)
                    })
                    .collect(),
            );
            assert_eq!(
                resultant(&f, &g).unwrap(),
                resultant_sylvester(&f, &g),
                "resultant mismatch for f={f}, g={g}"
            );
        }
    }

    #[test]
    fn discriminant_matches_oracle_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let d = rng.random_range(2..=8);
            let f = UniPoly::from_coeffs(
                (0..=d)
                    .map(|i| {
                        let c: i64 = if i == d {
                            rng.random_range(1..8)
                        } else {
                            rng.random_range(-7..8)
                        };
                        big(c)
                    })
                    .collect(),
            );
            assert_eq!(
                discriminant(&f).unwrap(),
                disc_oracle(&f),
                "discriminant mismatch for f={f}"
            );
        }
    }

    #[test]
    fn rational_content_scaling() {
        // disc(c f) = c^(2n-2) disc(f)
        let f = poly(&[-1, 0, 1]);
        let scaled = f.scale(&BigRational::new(3.into(), 2.into()));
        let expected = BigRational::new(3.into(), 2.into()).pow(2) * big(4);
        assert_eq!(discriminant(&scaled).unwrap(), expected);
    }

    #[test]
    fn degree_drop_reported() {
        // p = x^2 + 1, q = x^2: p - q drops to degree 0.
        let p = poly(&[1, 0, 1]);
        let q = poly(&[0, 0, 1]);
        assert!(matches!(
            discriminant_at(&p, &q, &big(1)),
            Err(DiscError::DegreeDrop { expected: 2, found: 0 })
        ));
        assert!(discriminant_at(&p, &q, &big(2)).is_ok());
    }

    #[test]
    fn square_tests() {
        assert!(is_rational_square(&BigRational::new(9.into(), 4.into())));
        assert!(!is_rational_square(&BigRational::new((-9).into(), 4.into())));
        assert!(is_rational_square(&big(0)));
        assert!(!is_rational_square(&big(2)));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&big(18)).unwrap(), big(2));
        assert_eq!(
            squarefree_part(&BigRational::new((-12).into(), 25.into())).unwrap(),
            big(-3)
        );
        assert_eq!(squarefree_part(&big(1)).unwrap(), big(1));
        assert!(squarefree_part(&big(0)).is_err());
    }

    #[test]
    fn same_squarefree_part_agrees_with_direct_computation() {
        let pairs = [
            (big(18), big(2), true),
            (big(18), big(8), true),
            (big(18), big(-2), false),
            (BigRational::new(3.into(), 4.into()), big(27), true),
            (big(5), big(10), false),
        ];
        for (a, b, expected) in pairs {
            assert_eq!(same_squarefree_part(&a, &b).unwrap(), expected);
            let direct = squarefree_part(&a).unwrap() == squarefree_part(&b).unwrap();
            assert_eq!(direct, expected);
        }
    }
}
