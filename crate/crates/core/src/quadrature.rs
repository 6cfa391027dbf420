//! Numerical integration oracles.
//!
//! [`adaptive_simpson`] handles the smooth germ/base integrands that feed the
//! closed-form integral; [`trapezoid_grid`] integrates sampled grids of the
//! fractal interpolant itself, where high-order rules buy nothing because the
//! integrand is merely continuous. All routines are sequential and
//! deterministic: identical inputs give bitwise-identical outputs.

use crate::eval::GridFunction;

/// Recursion limit for the adaptive bisection.
const MAX_DEPTH: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Accumulated local error estimates; an upper indication, not a bound.
    pub abs_error_estimate: f64,
    /// Number of integrand evaluations performed.
    pub evaluations: usize,
    /// True when some subinterval hit the recursion limit before meeting its
    /// local tolerance; `value` is then the best available estimate.
    pub depth_exhausted: bool,
}

struct SimpsonState<'a, F> {
    f: &'a F,
    evaluations: usize,
    error: f64,
    depth_exhausted: bool,
}

/// Adaptive Simpson integration of `f` over `[a, b]` aiming at absolute
/// tolerance `tol`. Subintervals are accepted on the Richardson comparison
/// `|S2 - S1| <= 15 * tol_local` and contribute the extrapolated value
/// `S2 + (S2 - S1)/15`. Non-finite samples poison the result (NaN value,
/// infinite error estimate).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadratureResult {
    assert!(a < b, "integration bounds must be ordered");
    assert!(tol > 0.0, "tolerance must be positive");
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut state = SimpsonState {
        f: &f,
        evaluations: 3,
        error: 0.0,
        depth_exhausted: false,
    };
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = refine(&mut state, a, m, b, fa, fm, fb, whole, tol, 0);
    QuadratureResult {
        value,
        abs_error_estimate: state.error,
        evaluations: state.evaluations,
        depth_exhausted: state.depth_exhausted,
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    state: &mut SimpsonState<F>,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = ((state.f)(lm), (state.f)(rm));
    state.evaluations += 2;
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite() && flm.is_finite() && frm.is_finite()) {
        state.error = f64::INFINITY;
        state.depth_exhausted = true;
        return f64::NAN;
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let split = left + right;
    let diff = split - whole;
    if diff.abs() <= 15.0 * tol {
        state.error += diff.abs() / 15.0;
        return split + diff / 15.0;
    }
    if depth >= MAX_DEPTH {
        state.error += diff.abs();
        state.depth_exhausted = true;
        return split + diff / 15.0;
    }
    let half = 0.5 * tol;
    refine(state, a, lm, m, fa, flm, fm, left, half, depth + 1)
        + refine(state, m, rm, b, fm, frm, fb, right, half, depth + 1)
}

/// Composite trapezoid sum over a (possibly non-uniform) grid, accumulated
/// left to right with Kahan compensation so the result does not depend on
/// how callers might batch the work.
pub fn trapezoid_grid(g: &GridFunction) -> f64 {
    let xs = g.xs();
    let ys = g.ys();
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for j in 0..xs.len() - 1 {
        let term = 0.5 * (xs[j + 1] - xs[j]) * (ys[j] + ys[j + 1]);
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Estimate of `max |fn1 - fn2|` over `[a, b]` from `m` equally spaced
/// samples, inflated by a 1.25 safety factor to cover inter-sample peaks.
pub fn sup_norm_diff<F1, F2>(fn1: F1, fn2: F2, a: f64, b: f64, m: usize) -> f64
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    assert!(m >= 2, "need at least two samples");
    let mut max = 0.0f64;
    for j in 0..m {
        let t = if j == m - 1 {
            b
        } else {
            a + (b - a) * j as f64 / (m - 1) as f64
        };
        max = max.max((fn1(t) - fn2(t)).abs());
    }
    1.25 * max
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrands() {
        let r = adaptive_simpson(|x| x * x, 0.0, 1.0, 1e-12);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        assert!(!r.depth_exhausted);

        let r = adaptive_simpson(|x| 1.0 / (x + 1.0), 0.0, 1.0, 1e-12);
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-12);

        let r = adaptive_simpson(|x| x.powi(3) + x, 0.0, 1.0, 1e-12);
        assert!((r.value - 0.75).abs() < 1e-14);
    }

    #[test]
    fn cubics_are_exact_regardless_of_tolerance() {
        for tol in [1e-1, 1e-6, 1e-12] {
            let r = adaptive_simpson(|x| 2.0 * x.powi(3) - x.powi(2) + 0.5 * x - 3.0, -1.0, 2.0, tol);
            // antiderivative: x^4/2 - x^3/3 + x^2/4 - 3x
            let exact = (8.0 - 8.0 / 3.0 + 1.0 - 6.0) - (0.5 + 1.0 / 3.0 + 0.25 + 3.0);
            assert!((r.value - exact).abs() < 1e-13, "tol={tol}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn depth_exhaustion_is_flagged_not_fatal() {
        // Bit-hash noise has structure at every double, so the Richardson
        // comparison never settles and the recursion cap must fire.
        let noise = |x: f64| (x.to_bits().wrapping_mul(0x9E3779B97F4A7C15) >> 11) as f64 / (1u64 << 53) as f64;
        let r = adaptive_simpson(noise, 0.0, 1.0, 1e-12);
        assert!(r.depth_exhausted);
        assert!(r.value.is_finite());
    }

    #[test]
    fn non_finite_samples_poison_the_result() {
        let r = adaptive_simpson(|x| 1.0 / (x - 0.5), 0.0, 1.0, 1e-10);
        assert!(r.value.is_nan());
        assert!(r.abs_error_estimate.is_infinite());
    }

    #[test]
    fn trapezoid_on_constants_and_linears() {
        let xs: Vec<f64> = vec![0.0, 0.1, 0.35, 0.5, 0.77, 1.0];
        let ones = GridFunction::new(xs.clone(), vec![1.0; 6]).unwrap();
        assert!((trapezoid_grid(&ones) - 1.0).abs() < 1e-15);

        let xs: Vec<f64> = (0..101).map(|j| j as f64 / 100.0).collect();
        let ys = xs.clone();
        let linear = GridFunction::new(xs, ys).unwrap();
        assert_eq!(trapezoid_grid(&linear), 0.5);
    }

    #[test]
    fn trapezoid_invariant_under_refinement_of_linears() {
        // The integrand is piecewise linear over the coarse grid; inserting
        // midpoints must not change the sum.
        let xs = vec![0.0, 0.25, 0.6, 1.0];
        let ys = vec![1.0, -0.5, 2.0, 0.0];
        let coarse = GridFunction::new(xs.clone(), ys.clone()).unwrap();
        let mut fine_xs = Vec::new();
        let mut fine_ys = Vec::new();
        for j in 0..xs.len() - 1 {
            let mx = 0.5 * (xs[j] + xs[j + 1]);
            let my = 0.5 * (ys[j] + ys[j + 1]);
            fine_xs.extend_from_slice(&[xs[j], mx]);
            fine_ys.extend_from_slice(&[ys[j], my]);
        }
        fine_xs.push(1.0);
        fine_ys.push(0.0);
        let fine = GridFunction::new(fine_xs, fine_ys).unwrap();
        assert!((trapezoid_grid(&coarse) - trapezoid_grid(&fine)).abs() < 1e-15);
    }

    #[test]
    fn repeated_runs_are_bitwise_identical() {
        let f = |x: f64| (x * 7.3).sin() / (1.0 + x * x);
        let a = adaptive_simpson(f, 0.0, 2.0, 1e-10);
        let b = adaptive_simpson(f, 0.0, 2.0, 1e-10);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn sup_norm_diff_examples() {
        assert_eq!(sup_norm_diff(|x: f64| x.sin(), |x: f64| x.sin(), 0.0, 1.0, 100), 0.0);

        // max |x^3 - x| on [0,1] is 2/(3*sqrt(3)) at 1/sqrt(3).
        let d = sup_norm_diff(|x: f64| x.powi(3) + x, |x| 2.0 * x, 0.0, 1.0, 16385);
        let true_sup = 2.0 / (3.0 * 3.0f64.sqrt());
        assert!((d - 1.25 * true_sup).abs() < 1e-6);

        let d = sup_norm_diff(|x| x, |_| 0.0, 0.0, 1.0, 101);
        assert_eq!(d, 1.25);
    }
}
