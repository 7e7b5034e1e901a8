//! Word-size prime and modular arithmetic utilities shared by the modular
//! discriminant kernel and the finite-field polynomial module.

/// `(a * b) mod m` without overflow for any u64 inputs.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` mod prime `p` (Fermat).
#[inline]
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Deterministic Miller–Rabin, valid for all u64 (fixed witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ascending primes starting from the first prime >= `start`.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    let mut n = start.max(2);
    std::iter::from_fn(move || {
        while !is_prime_u64(n) {
            n += 1;
        }
        let p = n;
        n += 1;
        Some(p)
    })
}

/// Brent-style Pollard rho returning a nontrivial factor of composite `n`.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 3 && !is_prime_u64(n));
    if n % 2 == 0 {
        return 2;
    }
    for c in 1..64u64 {
        let f = |x: u64| addmod(mulmod(x, x, n), c, n);
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    // Unreachable in practice; fall back to trial division.
    let mut d = 3;
    while n % d != 0 {
        d += 2;
    }
    d
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization of `n` as (prime, exponent) pairs, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p)
    {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n % p == 0 {
            n /= p;
            push(p, &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, &mut out);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality() {
        let primes: Vec<u64> = primes_from(2).take(10).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [2u64 * 3 * 3 * 5, 1_000_003, 6_700_417 * 97, (1 << 32) - 1] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }

    #[test]
    fn modular_inverse() {
        let p = 1_000_000_007u64;
        for a in [1u64, 2, 999, p - 1] {
            assert_eq!(mulmod(a, invmod(a, p), p), 1);
        }
    }
}
