//! Simultaneous root finding (Aberth–Ehrlich) for complex-coefficient
//! polynomials, with convex-hull initial radii, Newton polishing at twice
//! the working precision, and certified relative residuals.

use super::hp::{Ctx, Cx, Real};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("root finding did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("residual certification failed for root {index}: |f| ~ 2^{log2_residual} exceeds 2^{log2_tolerance}")]
    ResidualTooLarge {
        index: usize,
        log2_residual: i64,
        log2_tolerance: i64,
    },
    #[error("two computed roots coincide at working precision")]
    CoincidentRoots,
    #[error("polynomial must have degree >= 1")]
    Degenerate,
}

/// Initial guesses from the upper convex hull of (i, log2 |a_i|): each hull
/// edge of horizontal span k contributes k guesses at its associated
/// radius, with deterministic angular offsets breaking symmetry.
fn initial_guesses(ctx: &Ctx, coeffs: &[Cx]) -> Vec<Cx> {
    let n = coeffs.len() - 1;
    let logs: Vec<Option<f64>> = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                None
            } else {
                let m = ctx.cabs2(c).log2_approx() / 2.0;
                Some(m)
            }
        })
        .collect();
    // Upper convex hull over points (i, log|a_i|), left to right.
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for (i, l) in logs.iter().enumerate() {
        let y = match l {
            None => continue,
            Some(y) => *y,
        };
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Remove x2 when it lies below the segment x1 -> i.
            let lhs = (y2 - y1) * (i as f64 - x1 as f64);
            let rhs = (y - y1) * (x2 as f64 - x1 as f64);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((i, y));
    }
    let mut guesses = Vec::with_capacity(n);
    let mut edge_index = 0usize;
    for w in hull.windows(2) {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let span = k2 - k1;
        let radius = ((y1 - y2) / span as f64).exp2();
        for j in 0..span {
            // Deterministic angle with an offset avoiding the real axis
            // and exact symmetry.
            let angle = 2.0 * std::f64::consts::PI * (j as f64 + 0.37)
                / span as f64
                + 0.71 * (edge_index as f64 + 1.0)
                + 0.003 * guesses.len() as f64;
            let r = radius * (1.0 + 0.02 * ((j % 5) as f64));
            guesses.push(ctx.cx_from_f64(r * angle.cos(), r * angle.sin()));
        }
        edge_index += 1;
    }
    debug_assert_eq!(guesses.len(), n);
    guesses
}

fn derivative_coeffs(ctx: &Ctx, coeffs: &[Cx]) -> Vec<Cx> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ctx.cmul_real(c, &ctx.from_i64(i as i64)))
        .collect()
}

fn eval_cx_poly(ctx: &Ctx, coeffs: &[Cx], x: &Cx) -> Cx {
    let mut acc = Cx::zero();
    for c in coeffs.iter().rev() {
        acc = ctx.cmul(&acc, x);
        acc = ctx.cadd(&acc, c);
    }
    acc
}

/// All roots of a complex polynomial (coefficients ascending, leading
/// coefficient nonzero), sorted by (re, im). The returned residual bound is
/// the max over roots of log2(|f(x)| / sum |a_i| |x|^i).
pub struct RootsOutput {
    pub roots: Vec<Cx>,
    pub max_rel_residual_log2: i64,
    pub min_separation: Real,
    pub iterations: usize,
}

pub fn all_roots(ctx: &Ctx, coeffs: &[Cx], tol_log2: i64) -> Result<RootsOutput, RootError> {
    if coeffs.len() < 2 || coeffs.last().map(|c| c.is_zero()).unwrap_or(true) {
        return Err(RootError::Degenerate);
    }
    let n = coeffs.len() - 1;
    let deriv = derivative_coeffs(ctx, coeffs);
    let mut x = initial_guesses(ctx, coeffs);
    // Aberth converges when corrections fall below a loose threshold; the
    // certified tolerance is enforced after polishing.
    let loose_log2 = -(ctx.prec as i64) + 40;
    let max_iters = 600usize;
    let mut iterations = 0usize;
    for it in 0..max_iters {
        iterations = it + 1;
        let snapshot = x.clone();
        let updates: Vec<(Cx, bool)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = &snapshot[i];
                let f = eval_cx_poly(ctx, coeffs, xi);
                if f.is_zero() {
                    return (xi.clone(), true);
                }
                let fp = eval_cx_poly(ctx, &deriv, xi);
                if fp.is_zero() {
                    // Nudge away from the critical point.
                    let nudge = ctx.cx_from_f64(1e-3 * ((i + 1) as f64), 2e-3);
                    return (ctx.cadd(xi, &nudge), false);
                }
                let newton = ctx.cdiv(&f, &fp);
                let mut sum = Cx::zero();
                for (j, xj) in snapshot.iter().enumerate() {
                    if j != i {
                        let diff = ctx.csub(xi, xj);
                        if !diff.is_zero() {
                            sum = ctx.cadd(&sum, &ctx.cdiv(&ctx.cx_from_f64(1.0, 0.0), &diff));
                        }
                    }
                }
                let denom = ctx.csub(
                    &ctx.cx_from_f64(1.0, 0.0),
                    &ctx.cmul(&newton, &sum),
                );
                let w = if denom.is_zero() {
                    newton.clone()
                } else {
                    ctx.cdiv(&newton, &denom)
                };
                let next = ctx.csub(xi, &w);
                let scale = ctx.cabs2(xi).magnitude_log2().max(0);
                let done = ctx.cabs2(&w).le_pow2(2 * loose_log2 + scale);
                (next, done)
            })
            .collect();
        let all_done = updates.iter().all(|(_, d)| *d);
        x = updates.into_iter().map(|(v, _)| v).collect();
        if all_done {
            break;
        }
        if it + 1 == max_iters {
            return Err(RootError::NonConvergence(max_iters));
        }
    }

    // Newton polish at twice the working precision.
    let wide = ctx.doubled();
    let wide_coeffs: Vec<Cx> = coeffs.to_vec();
    let wide_deriv = derivative_coeffs(&wide, &wide_coeffs);
    let polished: Vec<Cx> = x
        .par_iter()
        .map(|x0| {
            let mut xi = x0.clone();
            for _ in 0..8 {
                let f = eval_cx_poly(&wide, &wide_coeffs, &xi);
                if f.is_zero() {
                    break;
                }
                let fp = eval_cx_poly(&wide, &wide_deriv, &xi);
                if fp.is_zero() {
                    break;
                }
                let d = wide.cdiv(&f, &fp);
                xi = wide.csub(&xi, &d);
                let scale = wide.cabs2(&xi).magnitude_log2().max(0);
                if wide.cabs2(&d).le_pow2(-4 * ctx.prec as i64 + 60 + scale) {
                    break;
                }
            }
            xi
        })
        .collect();

    // Certify residuals relative to sum |a_i| |x|^i.
    let abs_coeffs: Vec<Real> = coeffs.iter().map(|c| ctx.cabs(c)).collect();
    let mut max_res = i64::MIN;
    for (i, xi) in polished.iter().enumerate() {
        let f = eval_cx_poly(&wide, &wide_coeffs, xi);
        let ax = ctx.cabs(xi);
        let scale = ctx.eval_abs_poly(&abs_coeffs, &ax);
        let res_log2 = if f.is_zero() {
            -(4 * ctx.prec as i64)
        } else {
            wide.cabs(&f).magnitude_log2() - scale.magnitude_log2()
        };
        max_res = max_res.max(res_log2);
        if res_log2 > tol_log2 {
            return Err(RootError::ResidualTooLarge {
                index: i,
                log2_residual: res_log2,
                log2_tolerance: tol_log2,
            });
        }
    }

    // Canonical order and pairwise separation.
    let mut roots = polished;
    roots.sort_by(|a, b| {
        ctx.cmp(&a.re, &b.re)
            .then_with(|| ctx.cmp(&a.im, &b.im))
    });
    let mut min_sep: Option<Real> = None;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = ctx.cdist2(&roots[i], &roots[j]);
            if d.is_zero() {
                return Err(RootError::CoincidentRoots);
            }
            min_sep = Some(match min_sep {
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
    }
    let min_separation = ctx.sqrt(&min_sep.unwrap_or_else(Real::zero));
    Ok(RootsOutput {
        roots,
        max_rel_residual_log2: max_res,
        min_separation,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new(212)
    }

    fn real_poly(ctx: &Ctx, coeffs: &[i64]) -> Vec<Cx> {
        coeffs
            .iter()
            .map(|&c| ctx.cx(ctx.from_i64(c), super::super::hp::Real::zero()))
            .collect()
    }

    #[test]
    fn quadratic_roots() {
        let c = ctx();
        // x^2 - 1/4: roots +/- 1/2
        let coeffs = vec![
            c.cx(c.from_rational(&num_rational::BigRational::new(
                (-1).into(),
                4.into(),
            )), Real::zero()),
            c.cx(c.from_i64(0), Real::zero()),
            c.cx(c.from_i64(1), Real::zero()),
        ];
        let out = all_roots(&c, &coeffs, -160).unwrap();
        assert_eq!(out.roots.len(), 2);
        let r0 = out.roots[0].to_f64();
        let r1 = out.roots[1].to_f64();
        assert!((r0.0 + 0.5).abs() < 1e-12 && r0.1.abs() < 1e-12);
        assert!((r1.0 - 0.5).abs() < 1e-12 && r1.1.abs() < 1e-12);
    }

    #[test]
    fn wilkinson_like_small() {
        let c = ctx();
        // (x-1)(x-2)(x-3)(x-4)(x-5)
        let coeffs = real_poly(&c, &[-120, 274, -225, 85, -15, 1]);
        let out = all_roots(&c, &coeffs, -160).unwrap();
        for (k, root) in out.roots.iter().enumerate() {
            let (re, im) = root.to_f64();
            assert!((re - (k + 1) as f64).abs() < 1e-12, "root {k}: {re}");
            assert!(im.abs() < 1e-12);
        }
    }

    #[test]
    fn complex_pair() {
        let c = ctx();
        // x^2 + 1
        let coeffs = real_poly(&c, &[1, 0, 1]);
        let out = all_roots(&c, &coeffs, -160).unwrap();
        let (re0, im0) = out.roots[0].to_f64();
        let (re1, im1) = out.roots[1].to_f64();
        assert!(re0.abs() < 1e-12 && re1.abs() < 1e-12);
        assert!((im0 + 1.0).abs() < 1e-12);
        assert!((im1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_scale_roots() {
        let c = ctx();
        // roots at 1000, -1000, 1/1000 (scaled to integer coefficients):
        // (x - 1000)(x + 1000)(1000x - 1)
        let coeffs = real_poly(&c, &[1_000_000, -1_000_000_000, -1, 1000]);
        let hmm = all_roots(&c, &coeffs, -150).unwrap();
        let mut res: Vec<f64> = hmm.roots.iter().map(|r| r.to_f64().0).collect();
        res.sort_by(f64::total_cmp);
        assert!((res[0] + 1000.0).abs() < 1e-9);
        assert!((res[1] - 0.001).abs() < 1e-15);
        assert!((res[2] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_degenerate_input() {
        let c = ctx();
        assert!(matches!(
            all_roots(&c, &real_poly(&c, &[3]), -100),
            Err(RootError::Degenerate)
        ));
    }
}
