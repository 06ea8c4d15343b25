//! Fairness scores for producer assignments.
//!
//! * Jain index of the per-producer demand shares: `1` for perfectly equal
//!   shares, `1/k` when one producer serves everything.
//! * Distance index: one minus the share of all pairwise shortest-path
//!   distance that falls between nodes served by the same producer.
//! * KPI: `kpi_alpha * jain + (1 - kpi_alpha) * distance_index`.
//!
//! `kpi_alpha` weights the two indices and is unrelated to the balance
//! penalty `alpha` of the QUBO.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ShortestPaths;
use crate::solvers::Assignment;

/// KPI weighting used throughout unless configured otherwise.
pub const DEFAULT_KPI_ALPHA: f64 = 0.5;

/// Share of total demand served by each producer.
#[derive(Debug, Clone, PartialEq)]
pub struct ProducerLoads(pub Vec<f64>);

impl ProducerLoads {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn producer_loads(a: &Assignment, w: &[f64]) -> Result<ProducerLoads> {
    if w.len() != a.node_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for an assignment of {} nodes",
            w.len(),
            a.node_count()
        )));
    }
    let mut y = vec![0.0; a.k()];
    for (i, &p) in a.producer_of().iter().enumerate() {
        y[p] += w[i];
    }
    Ok(ProducerLoads(y))
}

pub fn jain_index(y: &ProducerLoads) -> Result<f64> {
    let y = y.as_slice();
    if y.is_empty() {
        return Err(Error::UndefinedMetric("Jain index of zero producers".into()));
    }
    if y.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParameter(format!("loads must be finite and nonnegative: {y:?}")));
    }
    let sum: f64 = y.iter().sum();
    let sum_sq: f64 = y.iter().map(|v| v * v).sum();
    if sum_sq == 0.0 {
        return Err(Error::UndefinedMetric("Jain index of all-zero loads".into()));
    }
    Ok(sum * sum / (y.len() as f64 * sum_sq))
}

/// `1 - within / total`, both sums over unordered node pairs of
/// shortest-path length; `within` only counts pairs sharing a producer.
pub fn distance_index(a: &Assignment, paths: &ShortestPaths) -> Result<f64> {
    let n = paths.node_count();
    if a.node_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "assignment has {} nodes, topology has {n}",
            a.node_count()
        )));
    }
    paths.require_connected()?;
    if n < 2 {
        // A single consumer: the only pair is the empty one.
        return Ok(if a.k() == 1 { 0.0 } else { 1.0 });
    }
    let p = a.producer_of();
    let mut within = 0.0;
    let mut total = 0.0;
    for u in 0..n {
        for v in (u + 1)..n {
            let d = paths.get(u, v);
            total += d;
            if p[u] == p[v] {
                within += d;
            }
        }
    }
    Ok(1.0 - within / total)
}

pub fn combined_kpi(jain: f64, distance_index: f64, kpi_alpha: f64) -> Result<f64> {
    for (name, v) in [("jain", jain), ("distance index", distance_index), ("kpi alpha", kpi_alpha)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
        }
    }
    Ok(kpi_alpha * jain + (1.0 - kpi_alpha) * distance_index)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub k: usize,
    pub jain: f64,
    pub distance_index: f64,
    pub kpi: f64,
    pub kpi_alpha: f64,
    pub solver: String,
    pub energy: f64,
}

impl KpiReport {
    pub fn evaluate(
        a: &Assignment,
        w: &[f64],
        paths: &ShortestPaths,
        kpi_alpha: f64,
        solver: &str,
        energy: f64,
    ) -> Result<Self> {
        let jain = jain_index(&producer_loads(a, w)?)?;
        // Rounding can push an exactly-fair index a hair above one.
        let jain = jain.min(1.0);
        let distance_index = distance_index(a, paths)?;
        let kpi = combined_kpi(jain, distance_index, kpi_alpha)?;
        Ok(KpiReport {
            k: a.k(),
            jain,
            distance_index,
            kpi,
            kpi_alpha,
            solver: solver.to_owned(),
            energy,
        })
    }
}
