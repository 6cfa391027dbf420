//! Mirroring an instance about the y-axis.
//!
//! The flipped instance lives on `[-xN, -x0]`: knots are negated and
//! reversed, the scale vector is reversed, and germ/base get their argument
//! negated. The flipped interpolant then equals the original one composed
//! with negation, so in particular both have the same definite integral —
//! reversal leaves `lambda = sum a_i * alpha_i` untouched and mirroring
//! preserves the germ and base integrals.
//!
//! The flip is materialized eagerly as a first-class instance, so every
//! other operation (evaluation, integration, plotting) applies to it
//! unchanged.

use crate::eval::{self, EvalReport};
use crate::ifs::{AlphaFractalSpec, Partition, ScaleVector};
use crate::integral::{self, integrate_closed_form};

/// A flipped instance is an ordinary instance on the mirrored interval.
pub type FlippedSpec = AlphaFractalSpec;

/// Mirror `spec` about the y-axis. Applying the flip twice reproduces the
/// original instance exactly (negation and reversal are involutions, and the
/// argument-negation wrapper on the expressions collapses on the second
/// pass).
pub fn flip_spec(spec: &AlphaFractalSpec) -> FlippedSpec {
    let knots: Vec<f64> = spec.partition().knots().iter().rev().map(|&x| -x).collect();
    let alphas: Vec<f64> = spec.alpha().entries().iter().rev().copied().collect();
    AlphaFractalSpec::new(
        Partition::new(knots).expect("mirrored knots stay strictly increasing"),
        ScaleVector::new(alphas).expect("mirrored scales keep their magnitudes"),
        spec.germ().reflect(),
        spec.base().reflect(),
    )
    .expect("the mirror of a valid instance is valid")
}

/// Certified pointwise evaluation of a flipped instance; same contract as
/// [`eval::eval_point`]. `flipped.eval_point(-x)` matches the original
/// instance at `x` within the two truncation bounds.
pub fn eval_flipped(flipped: &FlippedSpec, x: f64, depth: u32) -> Result<EvalReport, eval::Error> {
    eval::eval_point(flipped, x, depth)
}

/// Closed-form integral of the flipped instance over the mirrored interval;
/// equal to the closed-form integral of `spec` itself.
pub fn flip_integral(spec: &AlphaFractalSpec) -> Result<f64, integral::Error> {
    Ok(integrate_closed_form(&flip_spec(spec))?.value)
}
