//! Construction, evaluation, and exact integration of fractal interpolants.
//!
//! Starting from a germ function `f`, a base function `b` agreeing with `f`
//! at the interval endpoints, a knot partition, and a vector of vertical
//! scale factors below 1 in magnitude, the crate realizes the continuous
//! function `f_alpha` fixed by
//!
//! ```text
//! f_alpha(x) = f(x) + alpha_i * (f_alpha - b)(L_i^{-1}(x)),   x in [x_{i-1}, x_i],
//! ```
//!
//! where `L_i` is the affine map taking the whole interval onto the i-th
//! subinterval. `f_alpha` interpolates `f` at the knots and is typically
//! nowhere differentiable, yet its definite integral has a closed form; this
//! crate computes it, evaluates `f_alpha` pointwise with a certified
//! truncation bound, iterates the defining operator on grids as an
//! independent oracle, and mirrors whole instances about the y-axis.
//!
//! Modules:
//! * [`expr`] — parsing and evaluation of the germ/base expression texts.
//! * [`ifs`] — validated problem instances and their affine map tables.
//! * [`eval`] — certified pointwise evaluation and grid iteration.
//! * [`integral`] — the closed-form integral and its algebra.
//! * [`flip`] — mirrored instances.
//! * [`quadrature`] — Simpson and trapezoid oracles backing everything else.

pub mod eval;
pub mod expr;
pub mod flip;
pub mod ifs;
pub mod integral;
pub mod quadrature;

pub use eval::{depth_for_tolerance, eval_grid, eval_point, rb_apply, EvalReport, GridFunction};
pub use expr::FunctionExpr;
pub use flip::{eval_flipped, flip_integral, flip_spec, FlippedSpec};
pub use ifs::{AlphaFractalSpec, IfsMaps, Partition, ScaleVector, SpecError};
pub use integral::{
    combine_linear, compose_affine, integral_limit_check, integrate_closed_form,
    scale_vectors_equivalent, sum_zero_shortcut, IntegralResult,
};
pub use quadrature::{adaptive_simpson, sup_norm_diff, trapezoid_grid, QuadratureResult};
