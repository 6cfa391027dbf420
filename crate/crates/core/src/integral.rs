//! Closed-form definite integrals of fractal interpolants.
//!
//! Even without any explicit formula for the interpolant itself, its definite
//! integral over the whole interval collapses to
//!
//! ```text
//! (1/(1-lambda)) * INT f  -  (lambda/(1-lambda)) * INT b,
//!     lambda = sum a_i * alpha_i,
//! ```
//!
//! because substituting `z = L_i^{-1}(x)` into the fixed-point equation turns
//! the per-subinterval self-references back into integrals over the full
//! interval. Everything else in this module is algebra on top of that
//! identity: the zero-scale-sum shortcut on uniform partitions, equivalence
//! of scale vectors with equal sums, linear combinations, affine
//! compositions, and the shrink-to-germ limit.
//!
//! Germ and base integrals take an exact path for polynomial expressions so
//! the module's rational reference values do not inherit quadrature noise.

use crate::expr::{integrate_polynomial, EvalError, FunctionExpr};
use crate::ifs::{AlphaFractalSpec, ScaleVector, SpecError};
use crate::quadrature::adaptive_simpson;
use std::cell::RefCell;
use thiserror::Error;

/// Absolute tolerance requested from quadrature for non-polynomial germs.
const QUAD_TOL: f64 = 1e-12;

/// Error-estimate ceiling above which quadrature output is rejected.
const QUAD_REJECT: f64 = 1e-9;

/// Tolerance for "the scale sums agree" / "the partition is uniform" checks.
const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("instances differ in {what}")]
    SpecMismatch { what: &'static str },
    #[error("quadrature did not converge (error estimate {estimate:e} for requested {requested:e})")]
    NonConvergence { estimate: f64, requested: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// The closed-form integral and its constituents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub lambda: f64,
    pub integral_f: f64,
    pub integral_b: f64,
}

/// Deviation of the integral from the germ integral as the scale vector is
/// shrunk by halving factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleLimitReport {
    pub germ_integral: f64,
    pub rows: Vec<ScaleLimitRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleLimitRow {
    pub t: f64,
    pub integral: f64,
    pub deviation: f64,
}

impl ScaleLimitReport {
    /// True when the deviations do not increase as `t` halves.
    pub fn is_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].deviation <= w[0].deviation + 1e-15)
    }
}

/// Integral of a parsed expression over `[a, b]`: exact antiderivative for
/// polynomials, adaptive quadrature at 1e-12 otherwise.
fn expression_integral(expr: &FunctionExpr, a: f64, b: f64) -> Result<f64, Error> {
    if let Some(coeffs) = expr.as_polynomial() {
        return Ok(integrate_polynomial(&coeffs, a, b));
    }
    let first_error: RefCell<Option<EvalError>> = RefCell::new(None);
    let r = adaptive_simpson(
        |x| match expr.eval(x) {
            Ok(v) => v,
            Err(e) => {
                first_error.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        QUAD_TOL,
    );
    if let Some(e) = first_error.into_inner() {
        return Err(Error::Eval(e));
    }
    if !r.value.is_finite() || r.abs_error_estimate > QUAD_REJECT {
        return Err(Error::NonConvergence {
            estimate: r.abs_error_estimate,
            requested: QUAD_TOL,
        });
    }
    Ok(r.value)
}

/// Definite integral of the fractal interpolant over the whole interval.
pub fn integrate_closed_form(spec: &AlphaFractalSpec) -> Result<IntegralResult, Error> {
    let (a, b) = (spec.partition().lower(), spec.partition().upper());
    let integral_f = expression_integral(spec.germ(), a, b)?;
    let integral_b = expression_integral(spec.base(), a, b)?;
    let lambda = spec.lambda();
    Ok(IntegralResult {
        value: (integral_f - lambda * integral_b) / (1.0 - lambda),
        lambda,
        integral_f,
        integral_b,
    })
}

/// On a uniform partition with scale entries summing to zero, the integral
/// equals the germ integral for every base. Returns that germ integral, or
/// `None` when the hypotheses fail.
pub fn sum_zero_shortcut(spec: &AlphaFractalSpec) -> Result<Option<f64>, Error> {
    if !spec.partition().is_uniform() || spec.alpha().sum().abs() > SUM_TOL {
        return Ok(None);
    }
    expression_integral(spec.germ(), spec.partition().lower(), spec.partition().upper()).map(Some)
}

/// Two instances sharing a uniform partition, germ, and base have equal
/// integrals whenever their scale vectors have equal sums. Errors when the
/// shared parts differ.
pub fn scale_vectors_equivalent(
    spec_a: &AlphaFractalSpec,
    spec_b: &AlphaFractalSpec,
) -> Result<bool, Error> {
    if spec_a.partition() != spec_b.partition() {
        return Err(Error::SpecMismatch { what: "partition" });
    }
    if spec_a.germ() != spec_b.germ() {
        return Err(Error::SpecMismatch { what: "germ" });
    }
    if spec_a.base() != spec_b.base() {
        return Err(Error::SpecMismatch { what: "base" });
    }
    Ok(spec_a.partition().is_uniform()
        && (spec_a.alpha().sum() - spec_b.alpha().sum()).abs() <= SUM_TOL)
}

/// Instance for `gamma*f + delta*g` with base `gamma*b + delta*b~`. Both
/// inputs must share the partition and the scale vector; the combined
/// interpolant is then the matching linear combination pointwise, and so is
/// its integral.
pub fn combine_linear(
    spec_f: &AlphaFractalSpec,
    spec_g: &AlphaFractalSpec,
    gamma: f64,
    delta: f64,
) -> Result<AlphaFractalSpec, Error> {
    if spec_f.partition() != spec_g.partition() {
        return Err(Error::SpecMismatch { what: "partition" });
    }
    if spec_f.alpha() != spec_g.alpha() {
        return Err(Error::SpecMismatch { what: "scale vector" });
    }
    let germ = FunctionExpr::linear_combination(gamma, spec_f.germ(), delta, spec_g.germ());
    let base = FunctionExpr::linear_combination(gamma, spec_f.base(), delta, spec_g.base());
    Ok(AlphaFractalSpec::new(
        spec_f.partition().clone(),
        spec_f.alpha().clone(),
        germ,
        base,
    )?)
}

/// Instance for `g o f` with base `g o b`, `g(x) = p*x + q` affine. Its
/// integral is `p * (original integral) + q * (interval length)`.
pub fn compose_affine(spec: &AlphaFractalSpec, p: f64, q: f64) -> Result<AlphaFractalSpec, Error> {
    assert!(p.is_finite() && q.is_finite(), "affine coefficients must be finite");
    let germ = FunctionExpr::affine_image(p, q, spec.germ());
    let base = FunctionExpr::affine_image(p, q, spec.base());
    Ok(AlphaFractalSpec::new(
        spec.partition().clone(),
        spec.alpha().clone(),
        germ,
        base,
    )?)
}

/// Evaluate the closed form for `t*alpha` at `t = 1, 1/2, 1/4, 1/8, 1/16`
/// and report how the integral approaches the germ integral. The deviation
/// is `|t*lambda| * |INT f - INT b| / (1 - t*lambda)`, linear in `t` for
/// small `t`.
pub fn integral_limit_check(spec: &AlphaFractalSpec) -> Result<ScaleLimitReport, Error> {
    let germ_integral =
        expression_integral(spec.germ(), spec.partition().lower(), spec.partition().upper())?;
    let mut rows = Vec::with_capacity(5);
    let mut t = 1.0;
    for _ in 0..5 {
        let scaled = ScaleVector::new(spec.alpha().entries().iter().map(|a| a * t).collect())?;
        let shrunk = AlphaFractalSpec::new(
            spec.partition().clone(),
            scaled,
            spec.germ().clone(),
            spec.base().clone(),
        )?;
        let integral = integrate_closed_form(&shrunk)?.value;
        rows.push(ScaleLimitRow {
            t,
            integral,
            deviation: (integral - germ_integral).abs(),
        });
        t *= 0.5;
    }
    Ok(ScaleLimitReport {
        germ_integral,
        rows,
    })
}
