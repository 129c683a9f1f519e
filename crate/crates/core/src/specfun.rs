//! Principal branch of the Lambert W function.
//!
//! `W0(x)` is the solution `w >= -1` of `w * exp(w) = x`, defined for
//! `x >= -1/e`. Evaluation uses Halley's iteration on
//! `f(w) = w e^w - x`, started from `ln(1 + x)` for non-negative arguments
//! and from the branch-point series `-1 + p - p^2/3 + 11 p^3 / 72`,
//! `p = sqrt(2 (e x + 1))`, close to `-1/e`. Between the two a truncated
//! Taylor series about zero is used.

use std::f64::consts::E;

use crate::error::{FisherError, Result};

/// Upper bound on Halley iterations.
pub const MAX_ITERATIONS: usize = 50;

/// Relative residual tolerance: `|w e^w - x| <= RESIDUAL_TOL * max(1, |x|)`.
pub const RESIDUAL_TOL: f64 = 1e-12;

const BRANCH_POINT: f64 = -1.0 / E;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertResult {
    pub w: f64,
    pub iterations: usize,
    /// `|w e^w - x|` at the returned `w`.
    pub residual: f64,
}

fn initial_guess(x: f64) -> f64 {
    if x >= 0.0 {
        x.ln_1p()
    } else if x < -0.25 {
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        x * (1.0 - x * (1.0 - 1.5 * x))
    }
}

/// Evaluates `W0(x)`.
///
/// Arguments below `-1/e` are outside the real domain and return a domain
/// error. The tiny interval between the floating-point `-1/e` and the true
/// branch point maps to `w = -1`.
pub fn lambert_w0(x: f64) -> Result<LambertResult> {
    if x.is_nan() {
        return Err(FisherError::Domain("lambert_w0 of NaN".into()));
    }
    if x < BRANCH_POINT {
        return Err(FisherError::Domain(format!(
            "lambert_w0 requires x >= -1/e, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(LambertResult {
            w: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    if x == f64::INFINITY {
        return Ok(LambertResult {
            w: f64::INFINITY,
            iterations: 0,
            residual: 0.0,
        });
    }

    let tol = RESIDUAL_TOL * x.abs().max(1.0);
    let mut w = initial_guess(x);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 <= f64::EPSILON {
            // At the branch point the derivative vanishes.
            w = -1.0;
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        let next = (w - step).max(-1.0);
        iterations += 1;
        let converged = (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs());
        w = next;
        if converged {
            break;
        }
    }

    let residual = (w * w.exp() - x).abs();
    if residual > tol || !w.is_finite() {
        return Err(FisherError::Numerical(format!(
            "lambert_w0({x}) did not converge: w = {w}, residual = {residual:e} after {iterations} iterations"
        )));
    }
    Ok(LambertResult {
        w,
        iterations,
        residual,
    })
}

/// Evaluates `W0(e^l)` for arguments whose exponential may overflow.
///
/// Above `l = 500` Newton's iteration runs on `w + ln w = l`, started
/// from `l - ln l`.
pub fn lambert_w0_exp(l: f64) -> Result<f64> {
    if l.is_nan() {
        return Err(FisherError::Domain("lambert_w0_exp of NaN".into()));
    }
    if l <= 500.0 {
        return Ok(lambert_w0(l.exp())?.w);
    }
    let mut w = l - l.ln();
    for _ in 0..MAX_ITERATIONS {
        let next = w - (w + w.ln() - l) * w / (w + 1.0);
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs();
        w = next;
        if done {
            break;
        }
    }
    if !w.is_finite() || (w + w.ln() - l).abs() > RESIDUAL_TOL * l {
        return Err(FisherError::Numerical(format!("lambert_w0_exp({l}) did not converge")));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection on `w e^w - x` over a bracket known to contain the root.
    fn bisect(x: f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() - x > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn exp_form_agrees_across_the_switch() {
        for l in [-5.0, 0.0, 1.0, 50.0, 499.0] {
            let direct = lambert_w0(f64::exp(l)).unwrap().w;
            assert!((lambert_w0_exp(l).unwrap() - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
        for l in [500.5, 1e4, 1e8] {
            let w = lambert_w0_exp(l).unwrap();
            // w e^w = e^l  <=>  w + ln w = l
            assert!((w + w.ln() - l).abs() <= 1e-12 * l);
        }
    }

    #[test]
    fn zero_and_e() {
        assert_eq!(lambert_w0(0.0).unwrap().w, 0.0);
        assert!((lambert_w0(E).unwrap().w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn omega_constant_matches_bisection() {
        let oracle = bisect(1.0, 0.0, 1.0);
        let w = lambert_w0(1.0).unwrap().w;
        assert!((w - oracle).abs() < 1e-12);
        assert!((w - 0.567_143_290_409_783_8).abs() < 1e-15);
    }

    #[test]
    fn bisection_agreement_on_wide_range() {
        for &x in &[-0.36, -0.3, -0.1, 0.01, 0.5, 3.0, 100.0, 1e5, 1e8] {
            let oracle = bisect(x, -1.0, 25.0);
            let w = lambert_w0(x).unwrap().w;
            assert!((w - oracle).abs() < 1e-10, "x={x}: {w} vs {oracle}");
        }
    }

    #[test]
    fn domain_error_below_branch_point() {
        assert!(matches!(lambert_w0(-0.4), Err(FisherError::Domain(_))));
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn near_branch_point() {
        let r = lambert_w0(BRANCH_POINT + 1e-6).unwrap();
        assert!(r.w > -1.0 && r.w < -0.99);
        assert!(r.residual <= 1e-12);
        let r = lambert_w0(BRANCH_POINT).unwrap();
        assert!((r.w + 1.0).abs() < 1e-7);
    }

    #[test]
    fn huge_arguments_converge() {
        for &x in &[1e50, 1e140, 1e300] {
            let r = lambert_w0(x).unwrap();
            assert!(r.iterations <= MAX_ITERATIONS);
            assert!(r.residual <= RESIDUAL_TOL * x);
        }
    }
}
