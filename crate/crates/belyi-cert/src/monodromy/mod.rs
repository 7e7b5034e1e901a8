//! Numerical recovery of the branch-cycle triple of f = p/q by tracking the
//! full fiber along loops around 0, 1 and infinity.
//!
//! Conventions: the base point sits on the real segment between 0 and 1;
//! the loops around 0 and 1 are counterclockwise polygon circles reached by
//! real tails; the infinity loop is a clockwise polygon circle of larger
//! radius reached by a vertical tail (clockwise around the origin equals
//! counterclockwise around infinity). The identity sigma0 sigma1 sigmaInf =
//! 1 is *checked*, never used as a definition.

mod fix;
pub mod hp;
pub mod roots;

use crate::belyi::ExpandedMap;
use crate::permgroup::{PermError, Permutation};
use crate::qpoly::UniPoly;
use hp::{Ctx, Cx, Real};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MonodromyError {
    #[error("base parameter {0} is a branch value")]
    BranchValue(String),
    #[error("fiber degree dropped to {found} (expected {expected}) at the base parameter")]
    DegreeDrop { expected: usize, found: usize },
    #[error(transparent)]
    Roots(#[from] roots::RootError),
    #[error("step budget exhausted after {splits} subdivisions (precision {prec} bits)")]
    StepBudget { splits: u32, prec: u32 },
    #[error("strand collision: separation 2^{sep_log2} within 3x accumulated error 2^{err_log2}")]
    Collision { sep_log2: i64, err_log2: i64 },
    #[error("strand matching ambiguous for strand {strand}: best match only {ratio:.2}x closer than second best")]
    AmbiguousMatching { strand: usize, ratio: f64 },
    #[error("strand matching is not a bijection")]
    MatchingNotBijective,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Tracking and root-finding configuration.
#[derive(Clone, Debug)]
pub struct MonodromyConfig {
    pub precision_bits: u32,
    pub polygon_sides: usize,
    pub base_point: BigRational,
    pub finite_radius: BigRational,
    pub infinity_radius: BigRational,
    pub max_precision_bits: u32,
    /// Maximum recursive halvings of one polygon edge.
    pub max_splits: u32,
    /// Re-run at doubled precision and require identical permutations.
    pub double_check: bool,
}

impl Default for MonodromyConfig {
    fn default() -> Self {
        MonodromyConfig {
            precision_bits: 212,
            polygon_sides: 32,
            base_point: BigRational::new(1.into(), 2.into()),
            finite_radius: BigRational::new(1.into(), 4.into()),
            infinity_radius: BigRational::from_integer(3.into()),
            max_precision_bits: 1700,
            max_splits: 26,
            double_check: true,
        }
    }
}

impl MonodromyConfig {
    /// Certified relative residual tolerance: 2^-(prec-52), i.e. 2^-160 at
    /// the default 212 bits.
    pub fn residual_tol_log2(&self, prec: u32) -> i64 {
        -(prec as i64 - 52)
    }
}

/// The polynomials of one map materialized at one precision.
pub struct MapPolys {
    pub ctx: Ctx,
    p: Vec<Real>,
    q: Vec<Real>,
    dp: Vec<Real>,
    dq: Vec<Real>,
    degree: usize,
}

impl MapPolys {
    pub fn build(ctx: Ctx, p: &UniPoly, q: &UniPoly) -> MapPolys {
        let conv = |f: &UniPoly| -> Vec<Real> {
            f.coeffs().iter().map(|c| ctx.from_rational(c)).collect()
        };
        MapPolys {
            ctx,
            p: conv(p),
            q: conv(q),
            dp: conv(&p.derivative()),
            dq: conv(&q.derivative()),
            degree: p.degree().unwrap_or(0).max(q.degree().unwrap_or(0)),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of h(X) = p(X) - t q(X) at a fixed complex t.
    fn h_coeffs(&self, t: &Cx) -> Vec<Cx> {
        let ctx = &self.ctx;
        let n = self.p.len().max(self.q.len());
        (0..n)
            .map(|i| {
                let pi = self.p.get(i).cloned().unwrap_or_else(Real::zero);
                let qi = self.q.get(i).cloned().unwrap_or_else(Real::zero);
                let tq = ctx.cmul_real(t, &qi);
                ctx.cx(ctx.sub(&pi, &tq.re), tq.im.neg())
            })
            .collect()
    }

    /// Coefficients of dh/dX = p'(X) - t q'(X) at fixed t.
    fn dh_coeffs(&self, t: &Cx) -> Vec<Cx> {
        let ctx = &self.ctx;
        let n = self.dp.len().max(self.dq.len());
        (0..n)
            .map(|i| {
                let pi = self.dp.get(i).cloned().unwrap_or_else(Real::zero);
                let qi = self.dq.get(i).cloned().unwrap_or_else(Real::zero);
                let tq = ctx.cmul_real(t, &qi);
                ctx.cx(ctx.sub(&pi, &tq.re), tq.im.neg())
            })
            .collect()
    }

    fn eval_q(&self, x: &Cx) -> Cx {
        let ctx = &self.ctx;
        ctx.eval_real_poly(&self.q, x)
    }
}

fn eval_cx(ctx: &Ctx, coeffs: &[Cx], x: &Cx) -> Cx {
    let mut acc = Cx::zero();
    for c in coeffs.iter().rev() {
        acc = ctx.cmul(&acc, x);
        acc = ctx.cadd(&acc, c);
    }
    acc
}

/// A complete fiber of the map over one parameter value.
#[derive(Clone)]
pub struct Fiber {
    pub parameter: Cx,
    pub roots: Vec<Cx>,
    pub precision_bits: u32,
    pub min_separation: Real,
    pub max_rel_residual_log2: i64,
}

/// Computes all roots of p - t0 q at an exact rational base parameter,
/// escalating precision on non-convergence up to the configured cap.
pub fn basepoint_fiber(
    p: &UniPoly,
    q: &UniPoly,
    t0: &BigRational,
    config: &MonodromyConfig,
) -> Result<Fiber, MonodromyError> {
    if t0.is_zero() || t0.is_one() {
        return Err(MonodromyError::BranchValue(t0.to_string()));
    }
    let expected = p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
    let h = p.sub(&q.scale(t0));
    let found = h.degree().unwrap_or(0);
    if found != expected {
        return Err(MonodromyError::DegreeDrop { expected, found });
    }
    let mut prec = config.precision_bits;
    loop {
        let ctx = Ctx::new(prec);
        let coeffs: Vec<Cx> = h
            .coeffs()
            .iter()
            .map(|c| ctx.cx(ctx.from_rational(c), Real::zero()))
            .collect();
        match roots::all_roots(&ctx, &coeffs, config.residual_tol_log2(prec)) {
            Ok(out) => {
                let t_cx = ctx.cx(ctx.from_rational(t0), Real::zero());
                return Ok(Fiber {
                    parameter: t_cx,
                    roots: out.roots,
                    precision_bits: prec,
                    min_separation: out.min_separation,
                    max_rel_residual_log2: out.max_rel_residual_log2,
                });
            }
            Err(e) => {
                if prec * 2 > config.max_precision_bits {
                    return Err(e.into());
                }
                prec *= 2;
            }
        }
    }
}

/// Aggregated per-path diagnostics.
#[derive(Clone, Debug, Default)]
pub struct TrackDiagnostics {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub max_newton_correction_log2: i64,
    pub min_separation_log2: i64,
    pub accumulated_error_log2: i64,
}

impl TrackDiagnostics {
    fn new() -> Self {
        TrackDiagnostics {
            steps_accepted: 0,
            steps_rejected: 0,
            max_newton_correction_log2: i64::MIN,
            min_separation_log2: i64::MAX,
            accumulated_error_log2: i64::MIN,
        }
    }

    fn merge(&mut self, other: &TrackDiagnostics) {
        self.steps_accepted += other.steps_accepted;
        self.steps_rejected += other.steps_rejected;
        self.max_newton_correction_log2 = self
            .max_newton_correction_log2
            .max(other.max_newton_correction_log2);
        self.min_separation_log2 = self.min_separation_log2.min(other.min_separation_log2);
        self.accumulated_error_log2 = self
            .accumulated_error_log2
            .max(other.accumulated_error_log2);
    }
}

/// Recorded positions of every strand after each accepted step (for the
/// dessin drawing).
pub type Trails = Vec<Vec<(f64, f64)>>;

struct Tracker<'a> {
    map: &'a MapPolys,
    config: &'a MonodromyConfig,
    positions: Vec<Cx>,
    /// dh/dX at each strand and the current parameter (predictor input).
    dh_cache: Vec<Cx>,
    /// f64 shadow of the squared minimal separation of the last accepted
    /// fiber; exact recomputation happens only near decision boundaries.
    min_sep2_f: f64,
    acc_err_f: f64,
    /// Persistent step fraction of an edge (adaptive, halved on rejection).
    frac: f64,
    diag: TrackDiagnostics,
    trails: Option<Trails>,
}

struct StepOut {
    x: Cx,
    dh: Cx,
    drift2_f: f64,
    corr2_f: f64,
}

/// Exact squared minimal pairwise separation.
fn min_sep2_exact(ctx: &Ctx, positions: &[Cx]) -> Real {
    let n = positions.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local: Option<Real> = None;
            for j in i + 1..n {
                let d = ctx.cdist2(&positions[i], &positions[j]);
                local = Some(match local {
                    None => d,
                    Some(cur) => {
                        if ctx.lt(&d, &cur) {
                            d
                        } else {
                            cur
                        }
                    }
                });
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) => x,
                (x, None) => x,
                (Some(x), Some(y)) => Some(if ctx.lt(&x, &y) { x } else { y }),
            },
        )
        .unwrap_or_else(Real::zero)
}

fn min_sep2_f64(positions: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            best = best.min(dx * dx + dy * dy);
        }
    }
    best
}

impl<'a> Tracker<'a> {
    fn new(map: &'a MapPolys, config: &'a MonodromyConfig, fiber: &Fiber, record: bool) -> Self {
        let ctx = &map.ctx;
        let min_sep2 = ctx.mul(&fiber.min_separation, &fiber.min_separation);
        let trails = if record {
            Some(
                fiber
                    .roots
                    .iter()
                    .map(|r| vec![r.to_f64()])
                    .collect::<Trails>(),
            )
        } else {
            None
        };
        // Initialize the predictor derivative cache at the start parameter.
        let dh_start = map.dh_coeffs(&fiber.parameter);
        let dh_cache: Vec<Cx> = fiber
            .roots
            .par_iter()
            .map(|x| eval_cx(ctx, &dh_start, x))
            .collect();
        Tracker {
            map,
            config,
            positions: fiber.roots.clone(),
            dh_cache,
            min_sep2_f: min_sep2.to_f64(),
            acc_err_f: 0.0,
            frac: 0.25,
            diag: TrackDiagnostics::new(),
            trails,
        }
    }

    /// Tracks one straight parameter segment with an adaptive step size.
    fn traverse_edge(&mut self, from: &Cx, to: &Cx) -> Result<(), MonodromyError> {
        let ctx = &self.map.ctx;
        let min_frac = 0.5f64.powi(self.config.max_splits as i32);
        let interp = |s: f64| -> Cx {
            let sv = ctx.from_f64(s);
            ctx.cx(
                ctx.add(&from.re, &ctx.mul(&ctx.sub(&to.re, &from.re), &sv)),
                ctx.add(&from.im, &ctx.mul(&ctx.sub(&to.im, &from.im), &sv)),
            )
        };
        let mut pos = 0.0f64;
        let mut t_a = from.clone();
        while pos < 1.0 {
            let last = 1.0 - pos <= self.frac;
            let step = if last { 1.0 - pos } else { self.frac };
            let t_b = if last { to.clone() } else { interp(pos + step) };
            match self.try_step(&t_a, &t_b)? {
                Some(drift_ratio) => {
                    pos = if last { 1.0 } else { pos + step };
                    t_a = t_b;
                    // Proportional control: local error is cubic in the
                    // step, so scale by the sixth root of the squared-drift
                    // headroom, with a safety margin.
                    let growth = if drift_ratio > 0.0 {
                        (1.0 / drift_ratio).powf(1.0 / 6.0).clamp(0.5, 2.0) * 0.85
                    } else {
                        1.5
                    };
                    self.frac = (self.frac * growth.max(0.5)).min(1.0);
                }
                None => {
                    self.diag.steps_rejected += 1;
                    self.frac *= 0.4;
                    if self.frac < min_frac {
                        return Err(MonodromyError::StepBudget {
                            splits: self.config.max_splits,
                            prec: ctx.prec,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// One predictor-corrector step over the whole fiber. On acceptance
    /// returns the ratio of the measured squared drift to its threshold
    /// (for step-size control); `None` is a soft rejection.
    fn try_step(&mut self, from: &Cx, to: &Cx) -> Result<Option<f64>, MonodromyError> {
        let ctx = &self.map.ctx;
        let prec = ctx.prec as i64;
        let delta_t = ctx.csub(to, from);
        let half = ctx.from_rational(&BigRational::new(1.into(), 2.into()));
        let half_dt = ctx.cmul_real(&delta_t, &half);
        let t_mid = ctx.cadd(from, &half_dt);
        let dh_mid = self.map.dh_coeffs(&t_mid);
        let h_to = self.map.h_coeffs(to);
        let dh_to = self.map.dh_coeffs(to);

        let results: Vec<Option<StepOut>> = self
            .positions
            .par_iter()
            .zip(self.dh_cache.par_iter())
            .map(|(x0, dh0)| {
                // Midpoint predictor built on dx/dt = q(x) / (p'(x) - t q'(x)):
                // an Euler half-step (denominator cached from the previous
                // corrector), then the full step at the midpoint velocity.
                if dh0.is_zero() {
                    return None;
                }
                let qv = ctx.cdiv(&self.map.eval_q(x0), dh0);
                let xm = ctx.cadd(x0, &ctx.cmul(&qv, &half_dt));
                let denom_mid = eval_cx(ctx, &dh_mid, &xm);
                if denom_mid.is_zero() {
                    return None;
                }
                let vel_mid = ctx.cdiv(&self.map.eval_q(&xm), &denom_mid);
                let pred = ctx.cadd(x0, &ctx.cmul(&vel_mid, &delta_t));
                // Newton corrector at the new parameter: stop once the next
                // implied correction is safely below the residual tolerance.
                let mut x = pred.clone();
                let mut corr2_f = 0.0f64;
                let mut dh = dh0.clone();
                let mut converged = false;
                for _ in 0..24 {
                    let h = eval_cx(ctx, &h_to, &x);
                    if h.is_zero() {
                        converged = true;
                        break;
                    }
                    dh = eval_cx(ctx, &dh_to, &x);
                    if dh.is_zero() {
                        return None;
                    }
                    let corr = ctx.cdiv(&h, &dh);
                    x = ctx.csub(&x, &corr);
                    let corr2 = ctx.cabs2(&corr);
                    corr2_f = corr2.to_f64();
                    let scale = ctx.cabs2(&x).magnitude_log2().max(0);
                    if corr2.le_pow2(-prec + 39 + scale) {
                        converged = true;
                        break;
                    }
                }
                if !converged {
                    return None;
                }
                let drift2_f = ctx.cdist2(&x, &pred).to_f64();
                Some(StepOut {
                    x,
                    dh,
                    drift2_f,
                    corr2_f,
                })
            })
            .collect();

        let mut new_positions = Vec::with_capacity(self.positions.len());
        let mut new_dh = Vec::with_capacity(self.positions.len());
        let mut max_drift2_f = 0.0f64;
        let mut max_corr2_f = 0.0f64;
        for r in results {
            match r {
                None => return Ok(None),
                Some(s) => {
                    max_drift2_f = max_drift2_f.max(s.drift2_f);
                    max_corr2_f = max_corr2_f.max(s.corr2_f);
                    new_positions.push(s.x);
                    new_dh.push(s.dh);
                }
            }
        }
        // Drift rule: reject when the corrector moved any strand by more
        // than a third of the current minimal separation. The f64 shadow
        // decides except within its rounding margin; ties go to the exact
        // values.
        let margin = 1.0 + 1e-9;
        if 9.0 * max_drift2_f > self.min_sep2_f * margin {
            return Ok(None);
        }
        if 9.0 * max_drift2_f * margin > self.min_sep2_f {
            // Near the boundary: decide exactly.
            let exact_sep = min_sep2_exact(ctx, &self.positions);
            let mut exact_drift = Real::zero();
            for (x, pred) in new_positions.iter().zip(self.positions.iter()) {
                let d = ctx.cdist2(x, pred);
                if ctx.lt(&exact_drift, &d) {
                    exact_drift = d;
                }
            }
            if ctx.lt(&exact_sep, &ctx.mul(&exact_drift, &ctx.from_i64(9))) {
                return Ok(None);
            }
        }
        let pos_f: Vec<(f64, f64)> = new_positions.iter().map(|p| p.to_f64()).collect();
        let min_sep2_new_f = min_sep2_f64(&pos_f);
        if !(min_sep2_new_f > 0.0) {
            return Ok(None);
        }
        // Collision guard: separation must dominate 3x accumulated error.
        let acc_err_new = self.acc_err_f + max_corr2_f.sqrt();
        if 9.0 * acc_err_new * acc_err_new * margin >= min_sep2_new_f {
            let exact = min_sep2_exact(ctx, &new_positions);
            let guard = 9.0 * acc_err_new * acc_err_new;
            if exact.to_f64() <= guard {
                return Err(MonodromyError::Collision {
                    sep_log2: (exact.to_f64().log2() / 2.0) as i64,
                    err_log2: (acc_err_new.log2()) as i64,
                });
            }
        }

        let prev_sep2_f = self.min_sep2_f;
        self.positions = new_positions;
        self.dh_cache = new_dh;
        self.min_sep2_f = min_sep2_new_f;
        self.acc_err_f = acc_err_new;
        self.diag.steps_accepted += 1;
        if max_corr2_f > 0.0 {
            self.diag.max_newton_correction_log2 = self
                .diag
                .max_newton_correction_log2
                .max((max_corr2_f.log2() / 2.0) as i64);
        }
        self.diag.min_separation_log2 = self
            .diag
            .min_separation_log2
            .min((min_sep2_new_f.log2() / 2.0) as i64);
        if acc_err_new > 0.0 {
            self.diag.accumulated_error_log2 = (acc_err_new.log2()) as i64;
        }
        if let Some(trails) = &mut self.trails {
            for (trail, pos) in trails.iter_mut().zip(pos_f.iter()) {
                trail.push(*pos);
            }
        }
        let drift_ratio = if prev_sep2_f > 0.0 {
            (9.0 * max_drift2_f) / prev_sep2_f
        } else {
            1.0
        };
        Ok(Some(drift_ratio))
    }
}

/// Tracks a fiber along a piecewise-linear path given by waypoints. The
/// final fiber's separation and relative residual are recomputed exactly
/// and certified against the configured tolerance.
pub fn track(
    map: &MapPolys,
    fiber: &Fiber,
    waypoints: &[Cx],
    config: &MonodromyConfig,
    record_trails: bool,
) -> Result<(Fiber, TrackDiagnostics, Option<Trails>), MonodromyError> {
    let ctx = &map.ctx;
    let mut tracker = Tracker::new(map, config, fiber, record_trails);
    for pair in waypoints.windows(2) {
        tracker.traverse_edge(&pair[0], &pair[1])?;
    }
    let end = waypoints
        .last()
        .cloned()
        .unwrap_or_else(|| fiber.parameter.clone());
    let min_separation = ctx.sqrt(&min_sep2_exact(ctx, &tracker.positions));
    // Certify the final residuals relative to sum |h_i| |x|^i.
    let h_end = map.h_coeffs(&end);
    let abs_h: Vec<Real> = h_end.iter().map(|c| ctx.cabs(c)).collect();
    let tol = config.residual_tol_log2(ctx.prec);
    let mut max_res = i64::MIN;
    for (i, x) in tracker.positions.iter().enumerate() {
        let hv = eval_cx(ctx, &h_end, x);
        let scale = ctx.eval_abs_poly(&abs_h, &ctx.cabs(x));
        let res = if hv.is_zero() {
            -(2 * ctx.prec as i64)
        } else {
            ctx.cabs(&hv).magnitude_log2() - scale.magnitude_log2()
        };
        max_res = max_res.max(res);
        if res > tol {
            return Err(MonodromyError::Roots(roots::RootError::ResidualTooLarge {
                index: i,
                log2_residual: res,
                log2_tolerance: tol,
            }));
        }
    }
    let out = Fiber {
        parameter: end,
        roots: tracker.positions.clone(),
        precision_bits: ctx.prec,
        min_separation,
        max_rel_residual_log2: max_res,
    };
    Ok((out, tracker.diag.clone(), tracker.trails))
}

/// Branch values a loop can encircle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchTarget {
    Zero,
    One,
    Infinity,
}

impl std::fmt::Display for BranchTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BranchTarget::Zero => write!(f, "0"),
            BranchTarget::One => write!(f, "1"),
            BranchTarget::Infinity => write!(f, "infinity"),
        }
    }
}

/// Loop blueprint: a polygon circle with a tail from the base point,
/// rebuildable at any precision.
#[derive(Clone, Debug)]
pub struct LoopSpec {
    pub target: BranchTarget,
    pub base_point: BigRational,
    pub radius: BigRational,
    pub sides: usize,
}

impl LoopSpec {
    pub fn for_target(target: BranchTarget, config: &MonodromyConfig) -> LoopSpec {
        let radius = match target {
            BranchTarget::Infinity => config.infinity_radius.clone(),
            _ => config.finite_radius.clone(),
        };
        LoopSpec {
            target,
            base_point: config.base_point.clone(),
            radius,
            sides: config.polygon_sides,
        }
    }

    /// Unit rotation by 2 pi / sides via the half-angle recursion; `sides`
    /// is rounded up to a power of two.
    fn unit_rotation(ctx: &Ctx, sides: usize) -> (Cx, usize) {
        let mut n = 4usize;
        while n < sides {
            n *= 2;
        }
        // angle = 2 pi / n = pi / 2^(m-1) for n = 2^m; start from cos(pi/2).
        let mut cos = ctx.from_i64(0);
        let half = ctx.from_rational(&BigRational::new(1.into(), 2.into()));
        let one = ctx.from_i64(1);
        let mut angle_denominator = 4usize; // currently at cos(2 pi / 4)
        while angle_denominator < n {
            cos = ctx.sqrt(&ctx.mul(&ctx.add(&one, &cos), &half));
            angle_denominator *= 2;
        }
        let sin = ctx.sqrt(&ctx.sub(&one, &ctx.mul(&cos, &cos)));
        (ctx.cx(cos, sin), n)
    }

    /// Waypoints of the closed loop, starting and ending at the base point.
    pub fn waypoints(&self, ctx: &Ctx) -> Vec<Cx> {
        let base = ctx.cx(ctx.from_rational(&self.base_point), Real::zero());
        let rho = ctx.from_rational(&self.radius);
        let (omega, n) = Self::unit_rotation(ctx, self.sides);
        let mut points = Vec::with_capacity(n + 3);
        points.push(base.clone());
        match self.target {
            BranchTarget::Zero => {
                // Attach at angle 0 (the point rho), go counterclockwise.
                let mut offset = ctx.cx(rho.clone(), Real::zero());
                points.push(offset.clone());
                for _ in 0..n {
                    offset = ctx.cmul(&offset, &omega);
                    points.push(offset.clone());
                }
            }
            BranchTarget::One => {
                // Attach at angle pi (the point 1 - rho), counterclockwise.
                let one = ctx.cx(ctx.from_i64(1), Real::zero());
                let mut offset = ctx.cx(rho.neg(), Real::zero());
                points.push(ctx.cadd(&one, &offset));
                for _ in 0..n {
                    offset = ctx.cmul(&offset, &omega);
                    points.push(ctx.cadd(&one, &offset));
                }
            }
            BranchTarget::Infinity => {
                // Attach at angle pi/2 (the point i rho), clockwise: equal
                // to counterclockwise around infinity.
                let omega_inv = ctx.cx(omega.re.clone(), omega.im.neg());
                let mut offset = ctx.cx(Real::zero(), rho.clone());
                points.push(offset.clone());
                for _ in 0..n {
                    offset = ctx.cmul(&offset, &omega_inv);
                    points.push(offset.clone());
                }
            }
        }
        points.push(base);
        points
    }
}

/// Matches the tracked end fiber against the base fiber by nearest
/// neighbour, rejecting matches that are not 10x closer than the second
/// best; the result maps strand index to base index (1-based permutation).
pub fn match_strands(
    ctx: &Ctx,
    base: &Fiber,
    end_positions: &[Cx],
) -> Result<Permutation, MonodromyError> {
    let n = base.roots.len();
    let hundred = ctx.from_i64(100);
    let mut images = vec![0u32; n];
    let mut hit = vec![false; n];
    for (i, x) in end_positions.iter().enumerate() {
        let mut best: Option<(usize, Real)> = None;
        let mut second: Option<Real> = None;
        for (j, b) in base.roots.iter().enumerate() {
            let d = ctx.cdist2(x, b);
            match &best {
                None => best = Some((j, d)),
                Some((_, bd)) => {
                    if ctx.lt(&d, bd) {
                        second = Some(best.take().unwrap().1);
                        best = Some((j, d));
                    } else {
                        match &second {
                            None => second = Some(d),
                            Some(s) => {
                                if ctx.lt(&d, s) {
                                    second = Some(d);
                                }
                            }
                        }
                    }
                }
            }
        }
        let (j, d1) = best.expect("nonempty fiber");
        let d2 = second.expect("fiber has >= 2 roots");
        // Require d2 >= 100 * d1 (squared distances; 10x in distance).
        if !d1.is_zero() && ctx.lt(&d2, &ctx.mul(&hundred, &d1)) {
            let ratio = (d2.to_f64() / d1.to_f64()).sqrt();
            return Err(MonodromyError::AmbiguousMatching { strand: i, ratio });
        }
        if hit[j] {
            return Err(MonodromyError::MatchingNotBijective);
        }
        hit[j] = true;
        images[i] = j as u32 + 1;
    }
    Ok(Permutation::from_images(images)?)
}

/// Permutation of the base fiber induced by one loop.
pub fn loop_monodromy(
    map: &MapPolys,
    base: &Fiber,
    spec: &LoopSpec,
    config: &MonodromyConfig,
) -> Result<(Permutation, TrackDiagnostics), MonodromyError> {
    let waypoints = spec.waypoints(&map.ctx);
    let (end, diag, _) = track(map, base, &waypoints, config, false)?;
    let sigma = match_strands(&map.ctx, base, &end.roots)?;
    Ok((sigma, diag))
}

/// The three loop permutations around 0, 1, infinity with diagnostics.
pub struct MonodromyResult {
    pub sigma0: Permutation,
    pub sigma1: Permutation,
    pub sigma_inf: Permutation,
    pub precision_bits: u32,
    pub diagnostics: TrackDiagnostics,
    pub base_min_separation_log2: i64,
    pub product_is_identity: bool,
    /// Set when the doubled-precision re-run was performed.
    pub same_at_doubled_precision: Option<bool>,
}

fn triple_at_precision(
    ex: &ExpandedMap,
    config: &MonodromyConfig,
    prec: u32,
) -> Result<(Permutation, Permutation, Permutation, TrackDiagnostics, i64), MonodromyError> {
    let ctx = Ctx::new(prec);
    let map = MapPolys::build(ctx, &ex.p, &ex.q);
    let mut cfg = config.clone();
    cfg.precision_bits = prec;
    let base = basepoint_fiber(&ex.p, &ex.q, &config.base_point, &cfg)?;
    let mut diag = TrackDiagnostics::new();
    let mut perms = Vec::new();
    for target in [BranchTarget::Zero, BranchTarget::One, BranchTarget::Infinity] {
        let spec = LoopSpec::for_target(target, &cfg);
        let (sigma, d) = loop_monodromy(&map, &base, &spec, &cfg)?;
        diag.merge(&d);
        perms.push(sigma);
    }
    let sigma_inf = perms.pop().unwrap();
    let sigma1 = perms.pop().unwrap();
    let sigma0 = perms.pop().unwrap();
    let base_sep_log2 = if base.min_separation.is_zero() {
        i64::MIN
    } else {
        base.min_separation.magnitude_log2()
    };
    Ok((sigma0, sigma1, sigma_inf, diag, base_sep_log2))
}

/// Recovers the full branch-cycle triple, optionally re-deriving it at
/// doubled precision and demanding exact agreement.
pub fn monodromy_triple(
    ex: &ExpandedMap,
    config: &MonodromyConfig,
) -> Result<MonodromyResult, MonodromyError> {
    let (sigma0, sigma1, sigma_inf, diag, base_sep) =
        triple_at_precision(ex, config, config.precision_bits)?;
    let product = sigma0
        .compose(&sigma1)?
        .compose(&sigma_inf)?;
    let same_at_doubled = if config.double_check {
        let (s0, s1, si, _, _) =
            triple_at_precision(ex, config, config.precision_bits * 2)?;
        Some(s0 == sigma0 && s1 == sigma1 && si == sigma_inf)
    } else {
        None
    };
    Ok(MonodromyResult {
        sigma0,
        sigma1,
        sigma_inf,
        precision_bits: config.precision_bits,
        diagnostics: diag,
        base_min_separation_log2: base_sep,
        product_is_identity: product.is_identity(),
        same_at_doubled_precision: same_at_doubled,
    })
}
