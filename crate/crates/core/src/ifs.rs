//! Problem instances and the affine map tables they induce.
//!
//! An instance bundles a partition `x0 < x1 < ... < xN` of a compact
//! interval, a scale vector `(alpha_1, ..., alpha_N)` with every entry below 1
//! in magnitude, a germ function `f`, and a base function `b` matching `f` at
//! both endpoints. Each subinterval gets an affine contraction
//! `L_i(x) = a_i*x + e_i` mapping the whole interval onto it; the scale entry
//! `alpha_i` controls the vertical contraction paired with it.
//!
//! Construction validates every invariant, so downstream code can assume a
//! well-formed instance.

use crate::expr::{EvalError, FunctionExpr, ParseError};
use std::sync::OnceLock;
use thiserror::Error;

/// Absolute tolerance for the endpoint join conditions `b(x0)=f(x0)`,
/// `b(xN)=f(xN)` and for map endpoint identities.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Sample count for the dense sup-norm estimate of `max |f - b|`.
const SUP_SAMPLES: usize = 16385;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecError {
    #[error("partition needs at least 3 knots (2 subintervals), got {got}")]
    TooFewKnots { got: usize },
    #[error("knots must be strictly increasing and finite (violation at index {index})")]
    NonMonotonePartition { index: usize },
    #[error("scale entry {index} has magnitude {value} >= 1")]
    ScaleOutOfRange { index: usize, value: f64 },
    #[error("scale vector has {got} entries but the partition has {expected} subintervals")]
    LengthMismatch { expected: usize, got: usize },
    #[error("base does not match germ at x = {endpoint}: residual {residual:e}")]
    BaseEndpointMismatch { endpoint: f64, residual: f64 },
    #[error("germ or base is not finite at knot x = {knot}")]
    NonFiniteKnotValue { knot: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("x = {x} outside the interval [{lo}, {hi}]")]
pub struct OutOfDomain {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Strictly increasing knot sequence `x0 < x1 < ... < xN`, `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Partition, SpecError> {
        if knots.len() < 3 {
            return Err(SpecError::TooFewKnots { got: knots.len() });
        }
        for i in 1..knots.len() {
            if !knots[i].is_finite() || !knots[i - 1].is_finite() || knots[i - 1] >= knots[i] {
                return Err(SpecError::NonMonotonePartition { index: i });
            }
        }
        Ok(Partition { knots })
    }

    /// `n` equal subintervals of `[x0, xn]`; the last knot is pinned to `xn`.
    pub fn uniform(x0: f64, xn: f64, n: usize) -> Result<Partition, SpecError> {
        if n < 2 {
            return Err(SpecError::TooFewKnots { got: n + 1 });
        }
        let mut knots: Vec<f64> = (0..=n)
            .map(|j| x0 + (xn - x0) * j as f64 / n as f64)
            .collect();
        knots[n] = xn;
        Partition::new(knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of subintervals.
    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn lower(&self) -> f64 {
        self.knots[0]
    }

    pub fn upper(&self) -> f64 {
        *self.knots.last().expect("partition is non-empty")
    }

    pub fn length(&self) -> f64 {
        self.upper() - self.lower()
    }

    /// Zero-based index `k` of the subinterval `[x_k, x_{k+1}]` containing
    /// `x`. A shared interior knot belongs to the subinterval on its left;
    /// both neighbors agree in value there by the join conditions, the left
    /// rule just makes the choice deterministic.
    pub fn locate(&self, x: f64) -> Result<usize, OutOfDomain> {
        if !(x >= self.lower() && x <= self.upper()) {
            return Err(OutOfDomain {
                x,
                lo: self.lower(),
                hi: self.upper(),
            });
        }
        let k = self.knots.partition_point(|&t| t < x);
        Ok(k.saturating_sub(1))
    }

    /// True when every subinterval has the same width up to 1e-12 of the
    /// total length.
    pub fn is_uniform(&self) -> bool {
        let total = self.length();
        let first = (self.knots[1] - self.knots[0]) / total;
        self.knots
            .windows(2)
            .all(|w| ((w[1] - w[0]) / total - first).abs() <= 1e-12)
    }
}

/// Vertical scaling factors, each strictly below 1 in magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleVector {
    alphas: Vec<f64>,
}

impl ScaleVector {
    pub fn new(alphas: Vec<f64>) -> Result<ScaleVector, SpecError> {
        for (index, &value) in alphas.iter().enumerate() {
            if value.is_nan() || value.abs() >= 1.0 {
                return Err(SpecError::ScaleOutOfRange { index, value });
            }
        }
        Ok(ScaleVector { alphas })
    }

    pub fn entries(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `max |alpha_i|` — the contraction factor of the function-space operator.
    pub fn sup_norm(&self) -> f64 {
        self.alphas.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }

    pub fn sum(&self) -> f64 {
        self.alphas.iter().sum()
    }
}

/// One affine map row: `L(x) = a*x + e` paired with its vertical scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfsRow {
    pub a: f64,
    pub e: f64,
    pub alpha: f64,
}

impl IfsRow {
    pub fn apply(&self, x: f64) -> f64 {
        self.a * x + self.e
    }

    pub fn invert(&self, x: f64) -> f64 {
        (x - self.e) / self.a
    }
}

/// Coefficient table `{(a_i, e_i, alpha_i)}`, one row per subinterval, with
/// `a_i = (x_i - x_{i-1})/(xN - x0)` and `e_i = (xN*x_{i-1} - x0*x_i)/(xN - x0)`,
/// so that `L_i(x0) = x_{i-1}` and `L_i(xN) = x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsMaps {
    rows: Vec<IfsRow>,
}

impl IfsMaps {
    pub fn rows(&self) -> &[IfsRow] {
        &self.rows
    }
}

/// A validated problem instance: partition, scale vector, germ `f`, base `b`.
#[derive(Debug, Clone)]
pub struct AlphaFractalSpec {
    partition: Partition,
    alpha: ScaleVector,
    germ: FunctionExpr,
    base: FunctionExpr,
    sup_gap: OnceLock<f64>,
}

impl PartialEq for AlphaFractalSpec {
    fn eq(&self, other: &Self) -> bool {
        self.partition == other.partition
            && self.alpha == other.alpha
            && self.germ == other.germ
            && self.base == other.base
    }
}

impl AlphaFractalSpec {
    /// Validate and assemble an instance. Checks, in order: scale length
    /// against the partition, finiteness of the germ data at every knot, and
    /// the endpoint join conditions within [`ENDPOINT_TOL`].
    pub fn new(
        partition: Partition,
        alpha: ScaleVector,
        germ: FunctionExpr,
        base: FunctionExpr,
    ) -> Result<AlphaFractalSpec, SpecError> {
        if alpha.len() != partition.segments() {
            return Err(SpecError::LengthMismatch {
                expected: partition.segments(),
                got: alpha.len(),
            });
        }
        for &knot in partition.knots() {
            let y = germ.eval(knot)?;
            let bv = base.eval(knot)?;
            if !y.is_finite() || !bv.is_finite() {
                return Err(SpecError::NonFiniteKnotValue { knot });
            }
        }
        for endpoint in [partition.lower(), partition.upper()] {
            let residual = (base.eval(endpoint)? - germ.eval(endpoint)?).abs();
            if residual > ENDPOINT_TOL {
                return Err(SpecError::BaseEndpointMismatch { endpoint, residual });
            }
        }
        Ok(AlphaFractalSpec {
            partition,
            alpha,
            germ,
            base,
            sup_gap: OnceLock::new(),
        })
    }

    /// Shorthand: uniform partition of `[x0, xn]` into `n` subintervals with
    /// germ and base given as expression text.
    pub fn uniform(
        x0: f64,
        xn: f64,
        n: usize,
        alphas: Vec<f64>,
        germ: &str,
        base: &str,
    ) -> Result<AlphaFractalSpec, SpecError> {
        AlphaFractalSpec::new(
            Partition::uniform(x0, xn, n)?,
            ScaleVector::new(alphas)?,
            FunctionExpr::parse(germ)?,
            FunctionExpr::parse(base)?,
        )
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn alpha(&self) -> &ScaleVector {
        &self.alpha
    }

    pub fn germ(&self) -> &FunctionExpr {
        &self.germ
    }

    pub fn base(&self) -> &FunctionExpr {
        &self.base
    }

    /// Germ values at the knots — the interpolation data the fractal function
    /// passes through.
    pub fn knot_values(&self) -> Vec<f64> {
        self.partition
            .knots()
            .iter()
            .map(|&x| self.germ.eval(x).expect("validated at construction"))
            .collect()
    }

    /// Build the per-subinterval affine coefficient table.
    pub fn maps(&self) -> IfsMaps {
        let knots = self.partition.knots();
        let x0 = self.partition.lower();
        let xn = self.partition.upper();
        let span = xn - x0;
        let rows = knots
            .windows(2)
            .zip(self.alpha.entries())
            .map(|(w, &alpha)| IfsRow {
                a: (w[1] - w[0]) / span,
                e: (xn * w[0] - x0 * w[1]) / span,
                alpha,
            })
            .collect();
        IfsMaps { rows }
    }

    /// `lambda = sum a_i * alpha_i`, always in `(-1, 1)` for a valid
    /// instance. The products are summed in a value-sorted order so the
    /// result is invariant under reordering of the subintervals (flipping an
    /// instance reverses them).
    pub fn lambda(&self) -> f64 {
        let mut products: Vec<f64> = self
            .maps()
            .rows()
            .iter()
            .map(|row| row.a * row.alpha)
            .collect();
        products.sort_by(f64::total_cmp);
        products.iter().sum()
    }

    /// Dense-sampling estimate of `max |f - b|` over the interval (16385
    /// equally spaced points, no safety factor). Cached after the first call.
    /// Non-finite samples poison the estimate to NaN.
    pub fn germ_base_gap(&self) -> f64 {
        *self.sup_gap.get_or_init(|| {
            let (lo, hi) = (self.partition.lower(), self.partition.upper());
            let mut max = 0.0f64;
            for j in 0..SUP_SAMPLES {
                let t = if j == SUP_SAMPLES - 1 {
                    hi
                } else {
                    lo + (hi - lo) * j as f64 / (SUP_SAMPLES - 1) as f64
                };
                match (self.germ.eval(t), self.base.eval(t)) {
                    (Ok(fv), Ok(bv)) => max = max.max((fv - bv).abs()),
                    _ => return f64::NAN,
                }
            }
            max
        })
    }

    /// Upper bound `(s/(1-s)) * max|f-b|` with `s = max |alpha_i|` on how far
    /// the fractal function can drift from its germ.
    pub fn perturbation_bound(&self) -> f64 {
        let s = self.alpha.sup_norm();
        if s == 0.0 {
            return 0.0;
        }
        s / (1.0 - s) * self.germ_base_gap()
    }
}
