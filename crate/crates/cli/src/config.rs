//! JSON instance configs.
//!
//! ```json
//! {
//!   "interval": [0.0, 1.0],
//!   "partition": { "uniform": 5 },
//!   "f": "x^3 + x",
//!   "b": "2*x",
//!   "alpha": [0.2, -0.3, 0.5, 0.3, 0.4]
//! }
//! ```
//!
//! `partition` is either `{"uniform": N}` or an explicit knot list whose
//! first/last entries must equal the interval bounds. Unknown keys are
//! rejected so typos in scale lists fail loudly.

use afif_core::{AlphaFractalSpec, FunctionExpr, Partition, ScaleVector};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    pub interval: [f64; 2],
    pub partition: PartitionConfig,
    pub f: String,
    pub b: String,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionConfig {
    Uniform(UniformPartition),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformPartition {
    pub uniform: usize,
}

impl SpecConfig {
    pub fn load(path: &Path) -> Result<SpecConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: SpecConfig = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        Ok(config)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).context("cannot serialize config")?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }

    /// Build and validate the instance this config describes.
    pub fn build(&self) -> Result<AlphaFractalSpec> {
        let [x0, xn] = self.interval;
        if !x0.is_finite() || !xn.is_finite() || x0 >= xn {
            bail!("interval [{x0}, {xn}] is not increasing");
        }
        let partition = match &self.partition {
            PartitionConfig::Uniform(u) => Partition::uniform(x0, xn, u.uniform)?,
            PartitionConfig::Explicit(knots) => {
                let p = Partition::new(knots.clone())?;
                if p.lower() != x0 || p.upper() != xn {
                    bail!(
                        "explicit knots span [{}, {}] but the interval says [{x0}, {xn}]",
                        p.lower(),
                        p.upper()
                    );
                }
                p
            }
        };
        let germ = FunctionExpr::parse(&self.f).with_context(|| format!("germ `{}`", self.f))?;
        let base = FunctionExpr::parse(&self.b).with_context(|| format!("base `{}`", self.b))?;
        let alpha = ScaleVector::new(self.alpha.clone())?;
        Ok(AlphaFractalSpec::new(partition, alpha, germ, base)?)
    }

    /// The config of the mirrored instance. Uniform partitions stay
    /// symbolic; explicit knot lists are negated and reversed. Expression
    /// texts are re-emitted in canonical printed form.
    pub fn flipped(&self) -> Result<SpecConfig> {
        let [x0, xn] = self.interval;
        let partition = match &self.partition {
            PartitionConfig::Uniform(u) => PartitionConfig::Uniform(u.clone()),
            PartitionConfig::Explicit(knots) => {
                PartitionConfig::Explicit(knots.iter().rev().map(|&x| normalize_zero(-x)).collect())
            }
        };
        let f = FunctionExpr::parse(&self.f)
            .with_context(|| format!("germ `{}`", self.f))?
            .reflect()
            .to_string();
        let b = FunctionExpr::parse(&self.b)
            .with_context(|| format!("base `{}`", self.b))?
            .reflect()
            .to_string();
        Ok(SpecConfig {
            interval: [normalize_zero(-xn), normalize_zero(-x0)],
            partition,
            f,
            b,
            alpha: self.alpha.iter().rev().copied().collect(),
        })
    }
}

/// Keep `-0.0` out of emitted configs.
fn normalize_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}
