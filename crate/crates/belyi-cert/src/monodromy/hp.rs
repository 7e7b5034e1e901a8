//! Small self-contained binary floating point, plus the complex layer used
//! by root finding and path tracking. Operations truncate at the context
//! precision with errors below two units in the last place.
//!
//! Precisions up to [`FIX_MAX_PREC`] bits run on stack-allocated fixed
//! limb arrays ([`super::fix`]); wider precisions fall back to BigInt
//! mantissas. Division, square roots and rational conversions always go
//! through the BigInt route (they are rare in the hot paths).

use super::fix::{self, FixMag};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Largest precision served by the fixed-limb representation.
pub const FIX_MAX_PREC: u32 = 480;

/// Computation context: target mantissa precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub prec: u32,
}

impl Ctx {
    pub fn new(prec: u32) -> Self {
        Ctx { prec }
    }

    pub fn doubled(&self) -> Ctx {
        Ctx { prec: self.prec * 2 }
    }

    fn fixed(&self) -> bool {
        self.prec <= FIX_MAX_PREC
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Fix { neg: bool, mag: FixMag, e: i64 },
    Big { m: BigInt, e: i64 },
}

/// value = mantissa * 2^exp; zero is canonical.
#[derive(Clone, Debug)]
pub struct Real(Repr);

impl Real {
    pub fn zero() -> Real {
        Real(Repr::Fix {
            neg: false,
            mag: FixMag::zero(),
            e: 0,
        })
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Fix { mag, .. } => mag.is_zero(),
            Repr::Big { m, .. } => m.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Fix { neg, mag, .. } => *neg && !mag.is_zero(),
            Repr::Big { m, .. } => m.is_negative(),
        }
    }

    fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Fix { mag, .. } => mag.bits(),
            Repr::Big { m, .. } => m.bits(),
        }
    }

    fn exp(&self) -> i64 {
        match &self.0 {
            Repr::Fix { e, .. } => *e,
            Repr::Big { e, .. } => *e,
        }
    }

    /// ceil(log2 |x|) as an exact bound: |x| < 2^magnitude_log2().
    pub fn magnitude_log2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.bits() as i64 + self.exp()
    }

    /// Approximate log2 |x| as f64 (for heuristics only).
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.magnitude_biguint();
        let bits = mag.bits();
        let top = if bits > 64 {
            (&mag >> (bits - 64)).to_f64().unwrap_or(0.0)
        } else {
            mag.to_f64().unwrap_or(0.0)
        };
        let used = bits.min(64);
        top.log2() + (bits - used) as f64 + self.exp() as f64
    }

    fn magnitude_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Fix { mag, .. } => {
                let mut bytes = Vec::with_capacity(mag.len as usize * 8);
                for limb in mag.as_slice() {
                    bytes.extend_from_slice(&limb.to_le_bytes());
                }
                BigUint::from_bytes_le(&bytes)
            }
            Repr::Big { m, .. } => m.magnitude().clone(),
        }
    }

    fn to_signed_bigint(&self) -> (BigInt, i64) {
        match &self.0 {
            Repr::Fix { neg, mag, e } => {
                let sign = if mag.is_zero() {
                    Sign::NoSign
                } else if *neg {
                    Sign::Minus
                } else {
                    Sign::Plus
                };
                (
                    BigInt::from_biguint(sign, self.magnitude_biguint()),
                    if mag.is_zero() { 0 } else { *e },
                )
            }
            Repr::Big { m, e } => (m.clone(), *e),
        }
    }

    pub fn abs(&self) -> Real {
        match &self.0 {
            Repr::Fix { mag, e, .. } => Real(Repr::Fix {
                neg: false,
                mag: *mag,
                e: *e,
            }),
            Repr::Big { m, e } => Real(Repr::Big {
                m: m.abs(),
                e: *e,
            }),
        }
    }

    pub fn neg(&self) -> Real {
        match &self.0 {
            Repr::Fix { neg, mag, e } => Real(Repr::Fix {
                neg: !*neg && !mag.is_zero(),
                mag: *mag,
                e: *e,
            }),
            Repr::Big { m, e } => Real(Repr::Big {
                m: -m.clone(),
                e: *e,
            }),
        }
    }

    /// Multiply by 2^k (exact).
    pub fn scale2(&self, k: i64) -> Real {
        if self.is_zero() {
            return Real::zero();
        }
        match &self.0 {
            Repr::Fix { neg, mag, e } => Real(Repr::Fix {
                neg: *neg,
                mag: *mag,
                e: e + k,
            }),
            Repr::Big { m, e } => Real(Repr::Big {
                m: m.clone(),
                e: e + k,
            }),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        let mag = self.magnitude_biguint();
        let bits = mag.bits();
        if bits <= 53 {
            return sign * mag.to_f64().unwrap_or(0.0) * (self.exp() as f64).exp2();
        }
        // Truncate the magnitude to 52 bits (exactly representable).
        let shift = bits - 52;
        let top = (mag >> shift).to_f64().unwrap_or(0.0);
        sign * top * ((self.exp() + shift as i64) as f64).exp2()
    }

    /// True when |self| <= 2^t (conservative: uses the bit-length bound).
    pub fn le_pow2(&self, t: i64) -> bool {
        self.is_zero() || self.magnitude_log2() <= t
    }
}

impl Ctx {
    fn norm_big(&self, mut m: BigInt, mut e: i64) -> Real {
        if m.is_zero() {
            return Real::zero();
        }
        let bits = m.bits();
        let prec = self.prec as u64;
        if bits > prec {
            let shift = bits - prec;
            m >>= shift;
            e += shift as i64;
            if m.is_zero() {
                return Real::zero();
            }
        }
        Real(Repr::Big { m, e })
    }

    /// Repackages a signed BigInt mantissa into the context representation.
    fn adopt(&self, m: BigInt, e: i64) -> Real {
        if m.is_zero() {
            return Real::zero();
        }
        if !self.fixed() {
            return self.norm_big(m, e);
        }
        // Truncate to precision, then pack into fixed limbs.
        let bits = m.bits();
        let prec = self.prec as u64;
        let (mag_big, e) = if bits > prec {
            let shift = bits - prec;
            (m.magnitude() >> shift, e + shift as i64)
        } else {
            (m.magnitude().clone(), e)
        };
        if mag_big.is_zero() {
            return Real::zero();
        }
        let digits = mag_big.to_u64_digits();
        let mut mag = FixMag::zero();
        debug_assert!(digits.len() <= fix::MAX_LIMBS);
        mag.limbs[..digits.len()].copy_from_slice(&digits);
        mag.len = digits.len() as u8;
        Real(Repr::Fix {
            neg: m.is_negative(),
            mag,
            e,
        })
    }

    fn fix_parts(&self, a: &Real) -> (bool, FixMag, i64) {
        match &a.0 {
            Repr::Fix { neg, mag, e } => (*neg, *mag, *e),
            Repr::Big { .. } => {
                let (m, e) = a.to_signed_bigint();
                match self.adopt(m, e).0 {
                    Repr::Fix { neg, mag, e } => (neg, mag, e),
                    Repr::Big { .. } => unreachable!("fixed context adopts into fixed repr"),
                }
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Real {
        self.adopt(BigInt::from(v), 0)
    }

    pub fn from_f64(&self, v: f64) -> Real {
        if v == 0.0 {
            return Real::zero();
        }
        debug_assert!(v.is_finite());
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_raw == 0 {
            (frac as i64, -1074)
        } else {
            ((frac | (1 << 52)) as i64, exp_raw - 1075)
        };
        self.adopt(BigInt::from(sign * m), e)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Real {
        self.adopt(v.clone(), 0)
    }

    pub fn from_rational(&self, q: &BigRational) -> Real {
        if q.is_zero() {
            return Real::zero();
        }
        let num = q.numer();
        let den = q.denom();
        let shift = self.prec as i64 + den.bits() as i64 + 2;
        let scaled = (num << shift) / den;
        self.adopt(scaled, -shift)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        if self.fixed() {
            let (na, ma, ea) = self.fix_parts(a);
            let (nb, mb, eb) = self.fix_parts(b);
            let (neg, mag, e) = fix::add_signed(na, &ma, ea, nb, &mb, eb, self.prec);
            return Real(Repr::Fix { neg, mag, e });
        }
        let (ma, ea) = a.to_signed_bigint();
        let (mb, eb) = b.to_signed_bigint();
        if ma.is_zero() {
            return self.norm_big(mb, eb);
        }
        if mb.is_zero() {
            return self.norm_big(ma, ea);
        }
        let (hi_m, hi_e, lo_m, lo_e) = if ea >= eb {
            (ma, ea, mb, eb)
        } else {
            (mb, eb, ma, ea)
        };
        let d = hi_e - lo_e;
        let cap = 4 * self.prec as i64 + 128;
        if d > cap {
            return self.norm_big(hi_m, hi_e);
        }
        let m = (hi_m << d) + lo_m;
        self.norm_big(m, lo_e)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        if a.is_zero() || b.is_zero() {
            return Real::zero();
        }
        if self.fixed() {
            let (na, ma, ea) = self.fix_parts(a);
            let (nb, mb, eb) = self.fix_parts(b);
            let (mag, de) = fix::mul(&ma, &mb, self.prec);
            return Real(Repr::Fix {
                neg: na != nb,
                mag,
                e: ea + eb + de,
            });
        }
        let (ma, ea) = a.to_signed_bigint();
        let (mb, eb) = b.to_signed_bigint();
        self.norm_big(ma * mb, ea + eb)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        debug_assert!(!b.is_zero(), "division by zero");
        if a.is_zero() {
            return Real::zero();
        }
        let (ma, ea) = a.to_signed_bigint();
        let (mb, eb) = b.to_signed_bigint();
        let shift = self.prec as i64 + mb.bits() as i64 + 2;
        let q = (ma << shift) / mb;
        self.adopt(q, ea - shift - eb)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, a: &Real) -> Real {
        debug_assert!(!a.is_negative(), "sqrt of a negative value");
        if a.is_zero() {
            return Real::zero();
        }
        let (m, e) = a.to_signed_bigint();
        let bits = m.bits() as i64;
        let mut shift = (2 * self.prec as i64 - bits).max(0);
        if (e - shift) % 2 != 0 {
            shift += 1;
        }
        let root = (m << shift).sqrt();
        self.adopt(root, (e - shift) / 2)
    }

    /// Exact sign of a - b.
    pub fn cmp(&self, a: &Real, b: &Real) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (a.is_zero(), b.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if b.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if a.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => {}
        }
        match (a.is_negative(), b.is_negative()) {
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            (neg, _) => {
                let mag_order = if self.fixed() {
                    let (_, ma, ea) = self.fix_parts(a);
                    let (_, mb, eb) = self.fix_parts(b);
                    fix::cmp_abs(&ma, ea, &mb, eb)
                } else {
                    let (ma, ea) = a.to_signed_bigint();
                    let (mb, eb) = b.to_signed_bigint();
                    let d = ea - eb;
                    if d >= 0 {
                        (ma.magnitude() << d as u64).cmp(mb.magnitude())
                    } else {
                        ma.magnitude().cmp(&(mb.magnitude() << (-d) as u64))
                    }
                };
                if neg {
                    mag_order.reverse()
                } else {
                    mag_order
                }
            }
        }
    }

    pub fn lt(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) == std::cmp::Ordering::Less
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Real,
    pub im: Real,
}

impl Cx {
    pub fn zero() -> Cx {
        Cx {
            re: Real::zero(),
            im: Real::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn neg(&self) -> Cx {
        Cx {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Ctx {
    pub fn cx(&self, re: Real, im: Real) -> Cx {
        Cx { re, im }
    }

    pub fn cx_from_f64(&self, re: f64, im: f64) -> Cx {
        Cx {
            re: self.from_f64(re),
            im: self.from_f64(im),
        }
    }

    pub fn cadd(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn csub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: self.sub(&a.re, &b.re),
            im: self.sub(&a.im, &b.im),
        }
    }

    pub fn cmul(&self, a: &Cx, b: &Cx) -> Cx {
        let rr = self.mul(&a.re, &b.re);
        let ii = self.mul(&a.im, &b.im);
        let ri = self.mul(&a.re, &b.im);
        let ir = self.mul(&a.im, &b.re);
        Cx {
            re: self.sub(&rr, &ii),
            im: self.add(&ri, &ir),
        }
    }

    pub fn cmul_real(&self, a: &Cx, b: &Real) -> Cx {
        Cx {
            re: self.mul(&a.re, b),
            im: self.mul(&a.im, b),
        }
    }

    pub fn cdiv(&self, a: &Cx, b: &Cx) -> Cx {
        let den = self.cabs2(b);
        debug_assert!(!den.is_zero(), "complex division by zero");
        let rr = self.mul(&a.re, &b.re);
        let ii = self.mul(&a.im, &b.im);
        let ri = self.mul(&a.im, &b.re);
        let ir = self.mul(&a.re, &b.im);
        Cx {
            re: self.div(&self.add(&rr, &ii), &den),
            im: self.div(&self.sub(&ri, &ir), &den),
        }
    }

    /// |a|^2, exact up to rounding.
    pub fn cabs2(&self, a: &Cx) -> Real {
        self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im))
    }

    pub fn cabs(&self, a: &Cx) -> Real {
        self.sqrt(&self.cabs2(a))
    }

    /// |a - b|^2.
    pub fn cdist2(&self, a: &Cx, b: &Cx) -> Real {
        self.cabs2(&self.csub(a, b))
    }

    /// Horner evaluation of a real-coefficient polynomial at a complex
    /// point (coefficients ascending).
    pub fn eval_real_poly(&self, coeffs: &[Real], x: &Cx) -> Cx {
        let mut acc = Cx::zero();
        for c in coeffs.iter().rev() {
            acc = self.cmul(&acc, x);
            acc.re = self.add(&acc.re, c);
        }
        acc
    }

    /// Horner evaluation of sum |a_i| r^i for nonnegative r.
    pub fn eval_abs_poly(&self, coeffs: &[Real], r: &Real) -> Real {
        let mut acc = Real::zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, r), &c.abs());
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> Ctx {
        Ctx::new(128)
    }

    #[test]
    fn arithmetic_basics() {
        let c = ctx();
        let a = c.from_i64(3);
        let b = c.from_i64(4);
        assert_eq!(c.add(&a, &b).to_f64(), 7.0);
        assert_eq!(c.mul(&a, &b).to_f64(), 12.0);
        assert_eq!(c.sub(&a, &b).to_f64(), -1.0);
        let q = c.div(&a, &b);
        assert!((q.to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn sqrt_of_two_squares() {
        let c = ctx();
        let two = c.from_i64(2);
        let s = c.sqrt(&two);
        let back = c.mul(&s, &s);
        let err = c.sub(&back, &two).abs();
        assert!(err.le_pow2(-120), "err = 2^{}", err.magnitude_log2());
    }

    #[test]
    fn rational_conversion_accuracy() {
        let c = ctx();
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let r = c.from_rational(&q);
        let three = c.from_i64(3);
        let back = c.mul(&r, &three);
        let err = c.sub(&back, &c.from_i64(1)).abs();
        assert!(err.le_pow2(-120));
    }

    #[test]
    fn cancellation_is_exact_at_sufficient_precision() {
        let wide = Ctx::new(256);
        let big = wide.from_bigint(&(BigInt::from(1) << 200));
        let one = wide.from_i64(1);
        let sum = wide.add(&big, &one);
        let diff = wide.sub(&sum, &big);
        assert_eq!(diff.to_f64(), 1.0);
    }

    #[test]
    fn complex_multiplication_and_division() {
        let c = ctx();
        let a = c.cx_from_f64(1.0, 2.0);
        let b = c.cx_from_f64(3.0, -1.0);
        let prod = c.cmul(&a, &b);
        assert_eq!(prod.to_f64(), (5.0, 5.0));
        let quot = c.cdiv(&prod, &b);
        let err = c.cdist2(&quot, &a);
        assert!(err.le_pow2(-200));
    }

    #[test]
    fn polynomial_evaluation() {
        let c = ctx();
        let coeffs = vec![c.from_i64(1), c.from_i64(0), c.from_i64(1)];
        let x = c.cx_from_f64(0.0, 2.0);
        let v = c.eval_real_poly(&coeffs, &x);
        assert_eq!(v.to_f64(), (-3.0, 0.0));
    }

    #[test]
    fn comparisons() {
        let c = ctx();
        let a = c.from_f64(1.5);
        let b = c.from_f64(1.5000001);
        assert!(c.lt(&a, &b));
        assert!(!c.lt(&b, &a));
        assert!(c.lt(&c.from_i64(-2), &c.from_i64(1)));
        assert_eq!(c.cmp(&a, &a), std::cmp::Ordering::Equal);
        assert!(c.lt(&c.from_i64(-3), &c.from_i64(-2)));
    }

    #[test]
    fn f64_decomposition_roundtrip() {
        let c = ctx();
        for v in [0.5, -3.25, 1e-30, 6.02e23, -0.1] {
            assert_eq!(c.from_f64(v).to_f64(), v);
        }
    }

    /// Differential test: the fixed path at 212 bits must agree with the
    /// BigInt path at 512 bits within a couple of last-place units.
    #[test]
    fn fixed_and_big_paths_agree() {
        let fix_ctx = Ctx::new(212);
        let big_ctx = Ctx::new(512);
        let check = |ctx: &Ctx, f: &Real, b: &Real| {
            // |f - b| <= 2^(mag(b) - 208)
            let err = big_ctx.sub(f, b).abs();
            if b.is_zero() {
                assert!(err.is_zero() || err.le_pow2(-300));
            } else {
                assert!(
                    err.is_zero() || err.magnitude_log2() <= b.magnitude_log2() - 208,
                    "ctx {}: err 2^{} vs value 2^{}",
                    ctx.prec,
                    err.magnitude_log2(),
                    b.magnitude_log2()
                );
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let av = rng.random_range(-1.0e6..1.0e6);
            let bv = rng.random_range(-1.0e6..1.0e6) * 10f64.powi(rng.random_range(-9..9));
            let (af, bf) = (fix_ctx.from_f64(av), fix_ctx.from_f64(bv));
            let (ab, bb) = (big_ctx.from_f64(av), big_ctx.from_f64(bv));
            check(&fix_ctx, &fix_ctx.add(&af, &bf), &big_ctx.add(&ab, &bb));
            check(&fix_ctx, &fix_ctx.sub(&af, &bf), &big_ctx.sub(&ab, &bb));
            check(&fix_ctx, &fix_ctx.mul(&af, &bf), &big_ctx.mul(&ab, &bb));
            if bv != 0.0 {
                check(&fix_ctx, &fix_ctx.div(&af, &bf), &big_ctx.div(&ab, &bb));
            }
            assert_eq!(fix_ctx.cmp(&af, &bf), big_ctx.cmp(&ab, &bb));
        }
    }

    #[test]
    fn fixed_path_chains_match_big_path() {
        // Longer dependent chains (Horner-style) stay within tolerance.
        let fix_ctx = Ctx::new(212);
        let big_ctx = Ctx::new(640);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let coeffs_f64: Vec<f64> = (0..40).map(|_| rng.random_range(-5.0..5.0)).collect();
            let x = rng.random_range(-1.2..1.2);
            let cf: Vec<Real> = coeffs_f64.iter().map(|&v| fix_ctx.from_f64(v)).collect();
            let cb: Vec<Real> = coeffs_f64.iter().map(|&v| big_ctx.from_f64(v)).collect();
            let xf = fix_ctx.cx_from_f64(x, 0.3);
            let xb = big_ctx.cx_from_f64(x, 0.3);
            let vf = fix_ctx.eval_real_poly(&cf, &xf);
            let vb = big_ctx.eval_real_poly(&cb, &xb);
            let err = big_ctx.cdist2(
                &big_ctx.cx(vf.re.clone(), vf.im.clone()),
                &big_ctx.cx(vb.re.clone(), vb.im.clone()),
            );
            let scale = big_ctx.cabs2(&vb);
            if !scale.is_zero() {
                assert!(
                    err.is_zero()
                        || err.magnitude_log2() <= scale.magnitude_log2() - 2 * (212 - 24),
                    "err 2^{} scale 2^{}",
                    err.magnitude_log2(),
                    scale.magnitude_log2()
                );
            }
        }
    }
}
