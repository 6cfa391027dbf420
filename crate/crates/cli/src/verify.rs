//! The `verify` subcommand: run the whole invariant battery against one
//! instance and print a pass/fail table.

use afif_core::{
    combine_linear, compose_affine, depth_for_tolerance, eval_flipped, eval_grid, eval_point,
    flip_integral, flip_spec, integrate_closed_form, rb_apply, trapezoid_grid, AlphaFractalSpec,
};
use anyhow::Result;

const BRUTE_GRID: usize = (1 << 14) + 1;
const CERT_TOL: f64 = 1e-8;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

/// Low-discrepancy interior samples, deterministic across runs.
fn golden_ratio_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let mut t = 0.5f64;
    (0..count)
        .map(|_| {
            t = (t + 0.618033988749895).fract();
            lo + t * (hi - lo)
        })
        .collect()
}

pub fn run_all(spec: &AlphaFractalSpec) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let depth = depth_for_tolerance(spec, CERT_TOL);
    let closed = integrate_closed_form(spec)?;

    // Brute-force oracle: converge the grid iteration started from the germ
    // and integrate it with the trapezoid rule.
    let grid = eval_grid(spec, BRUTE_GRID, CERT_TOL)?;
    let brute = trapezoid_grid(&grid);
    let diff = (closed.value - brute).abs();
    checks.push(check(
        "closed form vs fixed-point oracle",
        diff <= 1e-3,
        format!("closed {:.12}, brute {brute:.12}, diff {diff:.2e} (tol 1e-3)", closed.value),
    ));

    let reapplied = rb_apply(spec, &grid)?;
    let residual = grid
        .ys()
        .iter()
        .zip(reapplied.ys())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    checks.push(check(
        "fixed-point residual",
        residual <= 1e-4,
        format!("sup|g - T(g)| = {residual:.2e} (tol 1e-4)"),
    ));

    let mut worst_knot = 0.0f64;
    let mut knot_bound = 0.0f64;
    for &knot in spec.partition().knots() {
        let r = eval_point(spec, knot, depth)?;
        worst_knot = worst_knot.max((r.value - spec.germ().eval(knot)?).abs());
        knot_bound = r.error_bound;
    }
    checks.push(check(
        "interpolation at the knots",
        worst_knot <= knot_bound,
        format!("worst |f_alpha(x_i) - f(x_i)| = {worst_knot:.2e} (bound {knot_bound:.2e})"),
    ));

    let bound = spec.perturbation_bound();
    let mut worst_dev = 0.0f64;
    let mut budget = 0.0f64;
    for j in 0..10_000 {
        let x = spec.partition().lower() + spec.partition().length() * j as f64 / 9_999.0;
        let r = eval_point(spec, x, depth)?;
        worst_dev = worst_dev.max((r.value - spec.germ().eval(x)?).abs());
        budget = bound + r.error_bound;
    }
    checks.push(check(
        "perturbation bound",
        worst_dev <= budget,
        format!("sampled sup|f_alpha - f| = {worst_dev:.6} (bound {budget:.6})"),
    ));

    let flipped = flip_spec(spec);
    let lambda_ok = flipped.lambda().to_bits() == spec.lambda().to_bits();
    let involution_ok = flip_spec(&flipped) == *spec;
    let mut worst_sym = 0.0f64;
    let mut sym_ok = true;
    for x in golden_ratio_points(spec.partition().lower(), spec.partition().upper(), 100) {
        let here = eval_point(spec, x, depth)?;
        let there = eval_flipped(&flipped, -x, depth)?;
        let dev = (here.value - there.value).abs();
        worst_sym = worst_sym.max(dev);
        sym_ok &= dev <= 2.0 * here.error_bound.max(there.error_bound);
    }
    checks.push(check(
        "flip symmetry",
        lambda_ok && involution_ok && sym_ok,
        format!(
            "lambda exact: {lambda_ok}, involution exact: {involution_ok}, worst |f_F(-x) - f_alpha(x)| = {worst_sym:.2e}"
        ),
    ));

    let mirrored = flip_integral(spec)?;
    let flip_diff = (mirrored - closed.value).abs();
    checks.push(check(
        "flipped integral equality",
        flip_diff <= 1e-12,
        format!("flipped {mirrored:.15} vs original {:.15} (tol 1e-12)", closed.value),
    ));

    let combined = combine_linear(spec, spec, 2.0, 3.0)?;
    let combined_value = integrate_closed_form(&combined)?.value;
    let lin_diff = (combined_value - 5.0 * closed.value).abs();
    checks.push(check(
        "linear-combination integral",
        lin_diff <= 1e-10,
        format!("2f+3f: {combined_value:.12} vs 5*integral (diff {lin_diff:.2e})"),
    ));

    let composed = compose_affine(spec, 2.0, 1.0)?;
    let composed_value = integrate_closed_form(&composed)?.value;
    let expected = 2.0 * closed.value + spec.partition().length();
    let comp_diff = (composed_value - expected).abs();
    checks.push(check(
        "affine-composition integral",
        comp_diff <= 1e-10,
        format!("2f+1: {composed_value:.12} vs {expected:.12} (diff {comp_diff:.2e})"),
    ));

    Ok(checks)
}
