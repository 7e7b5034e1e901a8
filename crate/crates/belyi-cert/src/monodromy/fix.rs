//! Fixed-width magnitude arithmetic for the high-precision float layer:
//! little-endian u64 limbs on the stack, at most [`MAX_LIMBS`] of them.
//! Multiplication and guarded addition never touch the heap; callers fall
//! back to BigInt for wider precisions.

pub const MAX_LIMBS: usize = 8;
const SCRATCH: usize = 24;

/// Magnitude with at most MAX_LIMBS significant limbs.
#[derive(Clone, Copy, Debug)]
pub struct FixMag {
    pub limbs: [u64; MAX_LIMBS],
    pub len: u8,
}

impl FixMag {
    pub fn zero() -> FixMag {
        FixMag {
            limbs: [0; MAX_LIMBS],
            len: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.len == 0
    }

    pub fn from_u64(v: u64) -> FixMag {
        let mut m = FixMag::zero();
        if v != 0 {
            m.limbs[0] = v;
            m.len = 1;
        }
        m
    }

    /// Number of significant bits.
    pub fn bits(&self) -> u64 {
        if self.len == 0 {
            return 0;
        }
        let top = self.limbs[self.len as usize - 1];
        (self.len as u64 - 1) * 64 + (64 - top.leading_zeros() as u64)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.limbs[..self.len as usize]
    }
}

fn trim_len(limbs: &[u64]) -> usize {
    let mut len = limbs.len();
    while len > 0 && limbs[len - 1] == 0 {
        len -= 1;
    }
    len
}

fn bits_of(limbs: &[u64]) -> u64 {
    let len = trim_len(limbs);
    if len == 0 {
        return 0;
    }
    (len as u64 - 1) * 64 + (64 - limbs[len - 1].leading_zeros() as u64)
}

/// dst = src << shift (dst zeroed first; must be large enough).
fn shl_into(dst: &mut [u64], src: &[u64], shift: u64) {
    for d in dst.iter_mut() {
        *d = 0;
    }
    let limb_shift = (shift / 64) as usize;
    let bit_shift = shift % 64;
    for (i, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        let lo = s << bit_shift;
        dst[i + limb_shift] |= lo;
        if bit_shift > 0 {
            dst[i + limb_shift + 1] |= s >> (64 - bit_shift);
        }
    }
}

/// dst = src >> shift (dst zeroed first), truncating low bits.
fn shr_into(dst: &mut [u64], src: &[u64], shift: u64) {
    for d in dst.iter_mut() {
        *d = 0;
    }
    let limb_shift = (shift / 64) as usize;
    let bit_shift = shift % 64;
    if limb_shift >= src.len() {
        return;
    }
    if bit_shift == 0 {
        for i in limb_shift..src.len() {
            dst[i - limb_shift] = src[i];
        }
    } else {
        for i in limb_shift..src.len() {
            let mut v = src[i] >> bit_shift;
            if i + 1 < src.len() {
                v |= src[i + 1] << (64 - bit_shift);
            }
            dst[i - limb_shift] = v;
        }
    }
}

/// In-place magnitude addition: a += b (slices LSB-aligned), returns carry.
fn add_assign(a: &mut [u64], b: &[u64]) {
    let mut carry = 0u64;
    for i in 0..a.len() {
        let bv = b.get(i).copied().unwrap_or(0);
        if carry == 0 && bv == 0 && i >= b.len() {
            break;
        }
        let (s1, c1) = a[i].overflowing_add(bv);
        let (s2, c2) = s1.overflowing_add(carry);
        a[i] = s2;
        carry = (c1 as u64) + (c2 as u64);
    }
    debug_assert_eq!(carry, 0, "addition overflowed the scratch buffer");
}

/// In-place magnitude subtraction: a -= b, requires a >= b.
fn sub_assign(a: &mut [u64], b: &[u64]) {
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let bv = b.get(i).copied().unwrap_or(0);
        if borrow == 0 && bv == 0 && i >= b.len() {
            break;
        }
        let (d1, b1) = a[i].overflowing_sub(bv);
        let (d2, b2) = d1.overflowing_sub(borrow);
        a[i] = d2;
        borrow = (b1 as u64) + (b2 as u64);
    }
    debug_assert_eq!(borrow, 0, "subtraction underflowed");
}

/// Compare LSB-aligned magnitudes.
fn cmp_mag(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let la = trim_len(a);
    let lb = trim_len(b);
    if la != lb {
        return la.cmp(&lb);
    }
    for i in (0..la).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Truncates a scratch magnitude to at most `prec` bits, adjusting the
/// exponent; returns the packed magnitude.
fn normalize(scratch: &[u64], e: i64, prec: u32) -> (FixMag, i64) {
    let bits = bits_of(scratch);
    if bits == 0 {
        return (FixMag::zero(), 0);
    }
    let mut out = FixMag::zero();
    if bits > prec as u64 {
        let shift = bits - prec as u64;
        let mut tmp = [0u64; SCRATCH];
        shr_into(&mut tmp[..scratch.len()], scratch, shift);
        let len = trim_len(&tmp[..scratch.len()]);
        debug_assert!(len <= MAX_LIMBS);
        out.limbs[..len].copy_from_slice(&tmp[..len]);
        out.len = len as u8;
        (out, e + shift as i64)
    } else {
        let len = trim_len(scratch);
        debug_assert!(len <= MAX_LIMBS);
        out.limbs[..len].copy_from_slice(&scratch[..len]);
        out.len = len as u8;
        (out, e)
    }
}

/// (a * b) truncated to prec bits. Returns (magnitude, exponent delta to
/// add to ea + eb).
pub fn mul(a: &FixMag, b: &FixMag, prec: u32) -> (FixMag, i64) {
    if a.is_zero() || b.is_zero() {
        return (FixMag::zero(), 0);
    }
    let mut prod = [0u64; SCRATCH];
    for (i, &ai) in a.as_slice().iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let mut carry = 0u128;
        for (j, &bj) in b.as_slice().iter().enumerate() {
            let cur = prod[i + j] as u128 + ai as u128 * bj as u128 + carry;
            prod[i + j] = cur as u64;
            carry = cur >> 64;
        }
        let mut k = i + b.len as usize;
        while carry > 0 {
            let cur = prod[k] as u128 + carry;
            prod[k] = cur as u64;
            carry = cur >> 64;
            k += 1;
        }
    }
    normalize(&prod[..a.len as usize + b.len as usize + 1], 0, prec)
}

/// Signed addition of (neg_a, a, ea) and (neg_b, b, eb), truncated to prec
/// bits. Low bits of the smaller operand beyond a guard window are
/// truncated (error below one ulp of the result). Returns (neg, mag, e).
pub fn add_signed(
    neg_a: bool,
    a: &FixMag,
    ea: i64,
    neg_b: bool,
    b: &FixMag,
    eb: i64,
    prec: u32,
) -> (bool, FixMag, i64) {
    if a.is_zero() {
        return (neg_b, *b, eb);
    }
    if b.is_zero() {
        return (neg_a, *a, ea);
    }
    let top_a = ea + a.bits() as i64;
    let top_b = eb + b.bits() as i64;
    let top = top_a.max(top_b);
    // Window: keep prec + 66 bits below the higher top.
    let window = prec as i64 + 66;
    let wb = top - window; // absolute exponent of the window's LSB
    // Fast path: one operand entirely below the window.
    if top_b < wb {
        return (neg_a, *a, ea);
    }
    if top_a < wb {
        return (neg_b, *b, eb);
    }
    let mut sa = [0u64; SCRATCH];
    let mut sb = [0u64; SCRATCH];
    let place = |dst: &mut [u64; SCRATCH], m: &FixMag, e: i64| {
        let shift = e - wb;
        if shift >= 0 {
            shl_into(&mut dst[..], m.as_slice(), shift as u64);
        } else {
            shr_into(&mut dst[..], m.as_slice(), (-shift) as u64);
        }
    };
    place(&mut sa, a, ea);
    place(&mut sb, b, eb);
    if neg_a == neg_b {
        add_assign(&mut sa, &sb);
        let (m, e) = normalize(&sa, wb, prec);
        (neg_a, m, e)
    } else {
        match cmp_mag(&sa, &sb) {
            std::cmp::Ordering::Equal => (false, FixMag::zero(), 0),
            std::cmp::Ordering::Greater => {
                sub_assign(&mut sa, &sb);
                let (m, e) = normalize(&sa, wb, prec);
                (neg_a, m, e)
            }
            std::cmp::Ordering::Less => {
                sub_assign(&mut sb, &sa);
                let (m, e) = normalize(&sb, wb, prec);
                (neg_b, m, e)
            }
        }
    }
}

/// Exact magnitude comparison of (a, ea) vs (b, eb).
pub fn cmp_abs(a: &FixMag, ea: i64, b: &FixMag, eb: i64) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    let top_a = ea + a.bits() as i64;
    let top_b = eb + b.bits() as i64;
    if top_a != top_b {
        return top_a.cmp(&top_b);
    }
    // Equal top bit: align LSBs and compare. The exponent difference is
    // bounded by the mantissa widths.
    let d = ea - eb;
    let mut sa = [0u64; SCRATCH];
    let mut sb = [0u64; SCRATCH];
    if d >= 0 {
        shl_into(&mut sa, a.as_slice(), d as u64);
        sb[..b.len as usize].copy_from_slice(b.as_slice());
    } else {
        sa[..a.len as usize].copy_from_slice(a.as_slice());
        shl_into(&mut sb, b.as_slice(), (-d) as u64);
    }
    cmp_mag(&sa, &sb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn to_big(m: &FixMag) -> BigUint {
        let mut out = BigUint::from(0u32);
        for (i, &l) in m.as_slice().iter().enumerate() {
            out += BigUint::from(l) << (64 * i);
        }
        out
    }

    fn random_mag(rng: &mut ChaCha8Rng, max_limbs: usize) -> FixMag {
        let len = rng.random_range(1..=max_limbs);
        let mut m = FixMag::zero();
        for i in 0..len {
            m.limbs[i] = rng.random();
        }
        if m.limbs[len - 1] == 0 {
            m.limbs[len - 1] = 1;
        }
        m.len = trim_len(&m.limbs) as u8;
        m
    }

    #[test]
    fn multiplication_matches_bigint() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = random_mag(&mut rng, 4);
            let b = random_mag(&mut rng, 4);
            let prec = 212u32;
            let (m, e) = mul(&a, &b, prec);
            let exact = to_big(&a) * to_big(&b);
            let got = to_big(&m) << e.max(0) as u64;
            // Truncation: got <= exact < got + 2^e ulp-wise.
            assert!(got <= exact);
            let diff = &exact - &got;
            assert!(diff < (BigUint::from(1u32) << e.max(0) as u64).max(BigUint::from(1u32)));
        }
    }

    #[test]
    fn addition_same_sign_matches_bigint_within_ulp() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let a = random_mag(&mut rng, 4);
            let b = random_mag(&mut rng, 4);
            let ea = rng.random_range(-80..80);
            let eb = rng.random_range(-80..80);
            let prec = 212u32;
            let (neg, m, e) = add_signed(false, &a, ea, false, &b, eb, prec);
            assert!(!neg);
            // Compare against exact BigUint arithmetic at a common scale.
            let base = ea.min(eb).min(e);
            let exact = (to_big(&a) << (ea - base) as u64) + (to_big(&b) << (eb - base) as u64);
            let got = to_big(&m) << (e - base) as u64;
            assert!(got <= exact);
            let diff = &exact - &got;
            // Error below 2 ulp of the result.
            let ulp = BigUint::from(1u32) << (e - base) as u64;
            assert!(diff < (ulp << 1) | BigUint::from(1u32), "diff too large");
        }
    }

    #[test]
    fn subtraction_cancellation_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let a = random_mag(&mut rng, 4);
            let mut b = a;
            // Flip one low bit so the difference is tiny but nonzero.
            b.limbs[0] ^= 1;
            b.len = trim_len(&b.limbs) as u8;
            let (neg, m, e) = add_signed(false, &a, 0, true, &b, 0, 212);
            let exact_a = to_big(&a);
            let exact_b = to_big(&b);
            let (exact, exact_neg) = if exact_a >= exact_b {
                (&exact_a - &exact_b, false)
            } else {
                (&exact_b - &exact_a, true)
            };
            if exact == BigUint::from(0u32) {
                assert!(m.is_zero());
            } else {
                assert_eq!(neg, exact_neg);
                let base = e.min(0);
                assert_eq!(
                    to_big(&m) << (e - base) as u64,
                    exact << (-base) as u64
                );
            }
        }
    }

    #[test]
    fn comparison_matches_bigint() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let a = random_mag(&mut rng, 4);
            let b = random_mag(&mut rng, 4);
            let ea = rng.random_range(-40..40);
            let eb = rng.random_range(-40..40);
            let exact = {
                let base = ea.min(eb);
                (to_big(&a) << (ea - base) as u64).cmp(&(to_big(&b) << (eb - base) as u64))
            };
            assert_eq!(cmp_abs(&a, ea, &b, eb), exact);
        }
    }

    #[test]
    fn far_apart_addition_keeps_dominant_term() {
        let a = FixMag::from_u64(5);
        let b = FixMag::from_u64(3);
        // b is 2^-1000 relative to a: dropped entirely.
        let (neg, m, e) = add_signed(false, &a, 0, false, &b, -1000, 212);
        assert!(!neg);
        assert_eq!(to_big(&m), BigUint::from(5u32));
        assert_eq!(e, 0);
    }
}
