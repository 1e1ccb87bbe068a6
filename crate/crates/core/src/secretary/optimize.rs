//! Numerical maximization of the limit win probability.

use serde::Serialize;

use super::analytic::asymptotic_win_unchecked;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalMuResult {
    pub mu_star: f64,
    pub x_star: f64,
    pub win_prob: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
/// Returns the final bracket.
pub fn golden_section_max<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> (f64, f64) {
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > width {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        }
    }
    (lo, hi)
}

pub(crate) fn central_difference<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Finds the `x` in `(0, 1)` maximizing the limit win probability and the
/// matching threshold `mu = 1 - x`.
///
/// Golden-section search narrows the bracket, then bisection on a central
/// difference of the objective pins the stationary point to `tolerance`.
pub fn optimize_mu(tolerance: f64) -> Result<OptimalMuResult> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return invalid(format!("tolerance must be positive, got {tolerance}"));
    }
    let g = asymptotic_win_unchecked;
    let (mut lo, mut hi) = golden_section_max(g, 0.01, 0.99, 1e-3_f64.max(tolerance));
    // Widen slightly so the root is strictly inside.
    lo = (lo - 1e-3).max(0.01);
    hi = (hi + 1e-3).min(0.99);
    let h = 1e-6;
    let slope = |x: f64| central_difference(&g, x, h);
    // Bisecting past the tolerance costs a few dozen evaluations.
    let target = (tolerance * 1e-3).max(1e-12);
    if slope(lo) > 0.0 && slope(hi) < 0.0 {
        while hi - lo > target {
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let x_star = 0.5 * (lo + hi);
    Ok(OptimalMuResult {
        mu_star: 1.0 - x_star,
        x_star,
        win_prob: g(x_star),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (lo, hi) = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-8);
        assert!(hi - lo <= 1e-8);
        assert!((0.5 * (lo + hi) - 0.3).abs() < 1e-7);
    }

    #[test]
    fn optimum_values() {
        let r = optimize_mu(1e-6).unwrap();
        assert!((r.x_star - 0.727374).abs() < 1e-5);
        assert!((r.mu_star - 0.272626).abs() < 1e-5);
        assert!((r.win_prob - 0.767974).abs() < 1e-5);
        assert_eq!(r.x_star, 1.0 - r.mu_star);
        let g = asymptotic_win_unchecked;
        assert!(g(r.x_star) >= g(r.x_star + 0.01));
        assert!(g(r.x_star) >= g(r.x_star - 0.01));
    }

    #[test]
    fn analytic_derivative_vanishes_at_optimum() {
        // d/dx [2x - 4x²/3 - (1-x)² ln(1-x²)/3], differentiated by hand.
        let dg = |x: f64| {
            2.0 - 8.0 / 3.0 * x
                + 2.0 / 3.0 * (1.0 - x) * (1.0 - x * x).ln()
                + 2.0 / 3.0 * x * (1.0 - x) * (1.0 - x) / (1.0 - x * x)
        };
        let r = optimize_mu(1e-9).unwrap();
        assert!(dg(r.x_star).abs() < 1e-6);
        assert!(central_difference(&asymptotic_win_unchecked, r.x_star, 1e-5).abs() <= 1e-4);
    }

    #[test]
    fn rejects_non_positive_tolerance() {
        assert!(optimize_mu(0.0).is_err());
        assert!(optimize_mu(-1.0).is_err());
        assert!(optimize_mu(f64::NAN).is_err());
    }
}
