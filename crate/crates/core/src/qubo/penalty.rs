use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{distance_laplacian, max_row_sum, Topology};

/// A penalty constant that is either shared or given per index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Penalty {
    Uniform(f64),
    PerIndex(Vec<f64>),
}

impl Penalty {
    pub fn at(&self, i: usize) -> f64 {
        match self {
            Penalty::Uniform(v) => *v,
            Penalty::PerIndex(v) => v[i],
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Penalty::Uniform(v) => *v,
            Penalty::PerIndex(v) => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn validate(&self, name: &str, len: usize) -> Result<()> {
        let values: &[f64] = match self {
            Penalty::Uniform(v) => std::slice::from_ref(v),
            Penalty::PerIndex(v) => {
                if v.len() != len {
                    return Err(Error::DimensionMismatch(format!(
                        "{name} has {} entries, expected {len}",
                        v.len()
                    )));
                }
                v
            }
        };
        match values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            Some(i) => Err(Error::InvalidParameter(format!(
                "{name}[{i}] = {} must be strictly positive",
                values[i]
            ))),
            None => Ok(()),
        }
    }
}

impl From<f64> for Penalty {
    fn from(v: f64) -> Self {
        Penalty::Uniform(v)
    }
}

/// Weights of the three cost terms: `beta` scales the cluster-distance term,
/// `alpha` (one per producer) the load balance and `gamma` (one per node)
/// the one-producer-per-node constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyConfig {
    pub beta: f64,
    pub alpha: Penalty,
    pub gamma: Penalty,
}

impl PenaltyConfig {
    pub fn uniform(beta: f64, alpha: f64, gamma: f64) -> Self {
        PenaltyConfig {
            beta,
            alpha: alpha.into(),
            gamma: gamma.into(),
        }
    }

    /// Check positivity and that per-index vectors have `k` and `n` entries.
    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta = {} must be strictly positive", self.beta)));
        }
        self.alpha.validate("alpha", k)?;
        self.gamma.validate("gamma", n)
    }
}

/// Penalties scaled to the instance so that breaking the one-hot or balance
/// constraints never pays off against the distance term:
///
/// * `beta = 1`
/// * `alpha = beta * s / min(w)^2`
/// * `gamma = 2 * (beta * s + alpha * max(w))`
///
/// where `s` is the largest row sum of the distance Laplacian (1 for graphs
/// without edges).
pub fn default_penalties(topo: &Topology, w: &[f64], _k: usize) -> PenaltyConfig {
    let beta = 1.0;
    let row_sum = max_row_sum(&distance_laplacian(topo));
    let scale = if row_sum > 0.0 { row_sum } else { 1.0 };
    let w_min = w.iter().copied().fold(f64::INFINITY, f64::min);
    let w_max = w.iter().copied().fold(0.0, f64::max);
    let alpha = beta * scale / (w_min * w_min);
    let gamma = 2.0 * (beta * scale + alpha * w_max);
    PenaltyConfig::uniform(beta, alpha, gamma)
}
