//! Evaluation of the fractal interpolant.
//!
//! The function is only defined implicitly, as the unique fixed point of a
//! contractive operator `T` on continuous functions:
//!
//! ```text
//! (Tg)(x) = f(x) + alpha_i * (g - b)(L_i^{-1}(x)),   x in [x_{i-1}, x_i].
//! ```
//!
//! Two independent evaluators are provided on purpose and cross-checked in
//! the test suites:
//!
//! * [`eval_point`] unrolls the fixed-point equation to a chosen depth `d`
//!   starting from the germ, which yields `T^d f` at one abscissa together
//!   with a certified truncation bound `s^{d+1}/(1-s) * max|f-b|`,
//!   `s = max |alpha_i|`.
//! * [`eval_grid`] iterates [`rb_apply`] on a sampled grid with
//!   piecewise-linear interpolation until successive sweeps settle. Its
//!   accuracy is limited by the interpolation error of the rough limit
//!   function, so it serves as an oracle rather than a certificate.

use crate::expr::EvalError;
use crate::ifs::{AlphaFractalSpec, OutOfDomain};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    OutOfDomain(#[from] OutOfDomain),
    #[error(transparent)]
    Expr(#[from] EvalError),
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
    #[error(
        "no convergence after {iterations} sweeps (last residual {residual:e}); \
         the grid interpolation error floor likely exceeds the tolerance, try more grid points"
    )]
    NoConvergence { iterations: usize, residual: f64 },
}

/// Sampled function values on an ordered abscissa grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<GridFunction, Error> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidGrid {
                reason: format!("{} abscissae vs {} ordinates", xs.len(), ys.len()),
            });
        }
        if xs.len() < 2 {
            return Err(Error::InvalidGrid {
                reason: "need at least 2 points".into(),
            });
        }
        for i in 0..xs.len() {
            if !xs[i].is_finite() || !ys[i].is_finite() {
                return Err(Error::InvalidGrid {
                    reason: format!("non-finite entry at index {i}"),
                });
            }
            if i > 0 && xs[i - 1] >= xs[i] {
                return Err(Error::InvalidGrid {
                    reason: format!("abscissae not strictly increasing at index {i}"),
                });
            }
        }
        Ok(GridFunction { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Piecewise-linear interpolation, clamped to the grid's span. Exact grid
    /// points return their stored ordinate.
    pub fn value_at(&self, z: f64) -> f64 {
        let z = z.clamp(self.xs[0], *self.xs.last().expect("non-empty grid"));
        let k = self.xs.partition_point(|&t| t < z).saturating_sub(1);
        let k = k.min(self.xs.len() - 2);
        if z == self.xs[k] {
            return self.ys[k];
        }
        if z == self.xs[k + 1] {
            return self.ys[k + 1];
        }
        let w = (z - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ys[k] + w * (self.ys[k + 1] - self.ys[k])
    }

    fn sup_diff(&self, other: &GridFunction) -> f64 {
        self.ys
            .iter()
            .zip(&other.ys)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Result of a certified pointwise evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: f64,
    pub depth_used: u32,
    /// Certified truncation bound: the true fixed-point value lies within
    /// this distance of `value`.
    pub error_bound: f64,
}

/// Truncation bound after unrolling to depth `d`.
fn truncation_bound(spec: &AlphaFractalSpec, depth: u32) -> f64 {
    let s = spec.alpha().sup_norm();
    if s == 0.0 {
        return 0.0;
    }
    s.powi(depth as i32 + 1) / (1.0 - s) * spec.germ_base_gap()
}

/// Unroll the fixed-point equation `depth` times at `x`, starting from the
/// germ. Depth 0 returns `f(x)` with the full perturbation-sized bound; each
/// further level multiplies the bound by `max |alpha_i|`.
pub fn eval_point(spec: &AlphaFractalSpec, x: f64, depth: u32) -> Result<EvalReport, Error> {
    let partition = spec.partition();
    partition.locate(x)?;
    let maps = spec.maps();
    let (lo, hi) = (partition.lower(), partition.upper());

    // Descend: pre-images of x under the subinterval maps, innermost last.
    // Clamping guards against the inverse stepping a rounding error outside
    // the interval.
    let mut points = Vec::with_capacity(depth as usize + 1);
    let mut segments = Vec::with_capacity(depth as usize);
    points.push(x);
    let mut z = x;
    for _ in 0..depth {
        let i = partition.locate(z).expect("pre-image clamped into domain");
        z = maps.rows()[i].invert(z).clamp(lo, hi);
        segments.push(i);
        points.push(z);
    }

    // Ascend: v_0 = f at the deepest pre-image, then apply one level of the
    // fixed-point equation per step back out.
    let germ = spec.germ();
    let base = spec.base();
    let mut value = germ.eval(points[depth as usize])?;
    for k in (0..depth as usize).rev() {
        let inner = points[k + 1];
        let alpha = maps.rows()[segments[k]].alpha;
        value = germ.eval(points[k])? + alpha * (value - base.eval(inner)?);
    }

    Ok(EvalReport {
        value,
        depth_used: depth,
        error_bound: truncation_bound(spec, depth),
    })
}

/// Smallest depth whose truncation bound is at or below `tol`; 0 when the
/// scale vector vanishes.
pub fn depth_for_tolerance(spec: &AlphaFractalSpec, tol: f64) -> u32 {
    assert!(tol > 0.0, "tolerance must be positive");
    let s = spec.alpha().sup_norm();
    let gap = spec.germ_base_gap();
    if s == 0.0 || gap == 0.0 {
        return 0;
    }
    let mut bound = s / (1.0 - s) * gap;
    let mut depth = 0u32;
    while bound > tol && bound > 0.0 {
        bound *= s;
        depth += 1;
    }
    depth
}

/// One sweep of the operator over a sampled grid: interpolate `g` piecewise
/// linearly and evaluate `f(x) + alpha_i * (g - b)(L_i^{-1}(x))` at every
/// grid point. The grid must span the instance's interval.
pub fn rb_apply(spec: &AlphaFractalSpec, g: &GridFunction) -> Result<GridFunction, Error> {
    let partition = spec.partition();
    let (lo, hi) = (partition.lower(), partition.upper());
    if g.xs[0] != lo || *g.xs.last().expect("non-empty grid") != hi {
        return Err(Error::InvalidGrid {
            reason: format!(
                "grid spans [{}, {}] but the instance lives on [{lo}, {hi}]",
                g.xs[0],
                g.xs.last().expect("non-empty grid")
            ),
        });
    }
    let maps = spec.maps();
    let germ = spec.germ();
    let base = spec.base();
    let mut ys = Vec::with_capacity(g.len());
    for &x in &g.xs {
        let i = partition.locate(x).expect("grid point inside the span");
        let z = maps.rows()[i].invert(x).clamp(lo, hi);
        let y = germ.eval(x)? + maps.rows()[i].alpha * (g.value_at(z) - base.eval(z)?);
        ys.push(y);
    }
    Ok(GridFunction { xs: g.xs.clone(), ys })
}

/// Iterate [`rb_apply`] from germ samples until successive sweeps differ by
/// at most `tol * (1 - s)` in sup norm (the a-posteriori contraction
/// estimate then puts the grid within `tol` of the discrete fixed point).
///
/// The grid is `n` uniform samples merged with the knots, so knot values can
/// be read off directly. Accuracy against the true function is limited by
/// piecewise-linear interpolation of a generally nowhere-differentiable
/// limit; treat results as oracle-quality.
pub fn eval_grid(spec: &AlphaFractalSpec, n: usize, tol: f64) -> Result<GridFunction, Error> {
    assert!(tol > 0.0, "tolerance must be positive");
    let partition = spec.partition();
    if n < partition.knots().len() {
        return Err(Error::InvalidGrid {
            reason: format!(
                "need at least {} grid points for this partition, got {n}",
                partition.knots().len()
            ),
        });
    }
    let (lo, hi) = (partition.lower(), partition.upper());
    let mut xs: Vec<f64> = (0..n)
        .map(|j| {
            if j == n - 1 {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (n - 1) as f64
            }
        })
        .collect();
    xs.extend_from_slice(partition.knots());
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let germ = spec.germ();
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        ys.push(germ.eval(x)?);
    }
    let mut g = GridFunction { xs, ys };

    let s = spec.alpha().sup_norm();
    let target = tol * (1.0 - s);
    let max_sweeps = 10 * depth_for_tolerance(spec, tol) as usize + 50;
    let mut residual = f64::INFINITY;
    for _ in 0..max_sweeps {
        let next = rb_apply(spec, &g)?;
        residual = next.sup_diff(&g);
        g = next;
        if residual <= target {
            return Ok(g);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_sweeps,
        residual,
    })
}
