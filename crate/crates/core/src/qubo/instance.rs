use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::PenaltyConfig;
use crate::error::{Error, Result};
use crate::graph::{distance_laplacian, laplacian, weighted_laplacian, Topology};

/// Flat layout of the `n * k` assignment bits, stacked producer by
/// producer: variable `j * n + i` is set when node `i` belongs to producer `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarIndex {
    nodes: usize,
    producers: usize,
}

impl VarIndex {
    pub fn new(nodes: usize, producers: usize) -> Self {
        VarIndex { nodes, producers }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn producers(&self) -> usize {
        self.producers
    }

    pub fn len(&self) -> usize {
        self.nodes * self.producers
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn var(&self, node: usize, producer: usize) -> usize {
        debug_assert!(node < self.nodes && producer < self.producers);
        producer * self.nodes + node
    }

    /// `(node, producer)` of a flat variable.
    pub fn pair(&self, var: usize) -> (usize, usize) {
        (var % self.nodes, var / self.nodes)
    }
}

/// Quadratic binary objective with a constant offset.
///
/// `energy(b) = offset + sum_i linear[i] b_i + sum_{i<j} quadratic[(i,j)] b_i b_j`.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboInstance {
    index: VarIndex,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboInstance {
    /// Build from raw coefficients. Quadratic keys are normalized to `i < j`
    /// and merged; diagonal keys fold into the linear part.
    pub fn from_terms(
        index: VarIndex,
        linear: impl IntoIterator<Item = (usize, f64)>,
        quadratic: impl IntoIterator<Item = ((usize, usize), f64)>,
        offset: f64,
    ) -> Result<Self> {
        let mut q = QuboInstance {
            index,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset,
        };
        for (v, c) in linear {
            q.add_linear(v, c)?;
        }
        for ((a, b), c) in quadratic {
            q.add_quadratic(a, b, c)?;
        }
        q.prune();
        Ok(q)
    }

    fn check_var(&self, v: usize) -> Result<()> {
        if v < self.index.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "variable {v} outside 0..{}",
                self.index.len()
            )))
        }
    }

    fn add_linear(&mut self, v: usize, c: f64) -> Result<()> {
        self.check_var(v)?;
        *self.linear.entry(v).or_insert(0.0) += c;
        Ok(())
    }

    fn add_quadratic(&mut self, a: usize, b: usize, c: f64) -> Result<()> {
        self.check_var(a)?;
        self.check_var(b)?;
        if a == b {
            // b_i^2 = b_i for binary variables.
            return self.add_linear(a, c);
        }
        let key = if a < b { (a, b) } else { (b, a) };
        *self.quadratic.entry(key).or_insert(0.0) += c;
        Ok(())
    }

    fn prune(&mut self) {
        self.linear.retain(|_, c| *c != 0.0);
        self.quadratic.retain(|_, c| *c != 0.0);
    }

    pub fn index(&self) -> VarIndex {
        self.index
    }

    pub fn num_vars(&self) -> usize {
        self.index.len()
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "bit vector has length {}, instance has {} variables",
                bits.len(),
                self.num_vars()
            )));
        }
        let mut e = self.offset;
        for (&v, &c) in &self.linear {
            if bits[v] {
                e += c;
            }
        }
        for (&(a, b), &c) in &self.quadratic {
            if bits[a] && bits[b] {
                e += c;
            }
        }
        Ok(e)
    }
}

/// Expand
///
/// ```text
///   beta * sum_j x_j^T M x_j
/// + sum_j alpha_j (sum_i w_i x_ij - W/k)^2
/// + sum_i gamma_i (sum_j x_ij - 1)^2
/// ```
///
/// into QUBO coefficients, where `W = sum_i w_i` and `M` is the cluster
/// matrix. Squares are expanded with `x^2 = x`; the constants
/// `alpha_j (W/k)^2` and `gamma_i` land in the offset.
fn assemble(cluster: &Array2<f64>, w: &[f64], k: usize, cfg: &PenaltyConfig) -> Result<QuboInstance> {
    let n = w.len();
    let index = VarIndex::new(n, k);
    let mut q = QuboInstance {
        index,
        linear: BTreeMap::new(),
        quadratic: BTreeMap::new(),
        offset: 0.0,
    };
    let target = w.iter().sum::<f64>() / k as f64;

    for j in 0..k {
        // Cluster term: M_ii b_i + 2 M_ii' b_i b_i' for i < i'.
        for i in 0..n {
            let diag = cluster[[i, i]];
            if diag != 0.0 {
                q.add_linear(index.var(i, j), cfg.beta * diag)?;
            }
            for i2 in (i + 1)..n {
                let m = cluster[[i, i2]];
                if m != 0.0 {
                    q.add_quadratic(index.var(i, j), index.var(i2, j), 2.0 * cfg.beta * m)?;
                }
            }
        }

        // Balance term of producer j.
        let alpha = cfg.alpha.at(j);
        for i in 0..n {
            q.add_linear(index.var(i, j), alpha * (w[i] * w[i] - 2.0 * target * w[i]))?;
            for i2 in (i + 1)..n {
                q.add_quadratic(index.var(i, j), index.var(i2, j), 2.0 * alpha * w[i] * w[i2])?;
            }
        }
        q.offset += alpha * target * target;
    }

    // One-hot term of node i: (sum_j b_ij)^2 - 2 sum_j b_ij + 1.
    for i in 0..n {
        let gamma = cfg.gamma.at(i);
        for j in 0..k {
            q.add_linear(index.var(i, j), -gamma)?;
            for j2 in (j + 1)..k {
                q.add_quadratic(index.var(i, j), index.var(i, j2), 2.0 * gamma)?;
            }
        }
        q.offset += gamma;
    }

    q.prune();
    Ok(q)
}

fn check_sizes(n: usize, w_len: usize, k: usize, cfg: &PenaltyConfig) -> Result<()> {
    if w_len != n {
        return Err(Error::DimensionMismatch(format!(
            "{w_len} weights for a topology with {n} nodes"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "producer count k = {k} must lie in 1..={n}"
        )));
    }
    cfg.validate(n, k)
}

/// Matrix `M` of the cluster term `beta * sum_j x_j^T M x_j`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterTerm {
    /// Pipe distances off the diagonal: charges every pipe whose two ends
    /// share a producer.
    #[default]
    DistanceLaplacian,
    /// `I D I^T`: charges every pipe whose ends belong to different
    /// producers, i.e. a distance-weighted cut.
    WeightedLaplacian,
}

impl ClusterTerm {
    pub fn name(self) -> &'static str {
        match self {
            ClusterTerm::DistanceLaplacian => "distance_laplacian",
            ClusterTerm::WeightedLaplacian => "weighted_laplacian",
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "distance_laplacian" => Ok(ClusterTerm::DistanceLaplacian),
            "weighted_laplacian" => Ok(ClusterTerm::WeightedLaplacian),
            other => Err(Error::InvalidParameter(format!(
                "unknown cluster term `{other}` (valid: distance_laplacian, weighted_laplacian)"
            ))),
        }
    }

    pub fn matrix(self, topo: &Topology) -> Array2<f64> {
        match self {
            ClusterTerm::DistanceLaplacian => distance_laplacian(topo),
            ClusterTerm::WeightedLaplacian => weighted_laplacian(topo),
        }
    }
}

/// Demand-weighted QUBO over the distance Laplacian.
pub fn build_qubo(topo: &Topology, w: &[f64], k: usize, cfg: &PenaltyConfig) -> Result<QuboInstance> {
    build_qubo_with(topo, w, k, cfg, ClusterTerm::DistanceLaplacian)
}

pub fn build_qubo_with(
    topo: &Topology,
    w: &[f64],
    k: usize,
    cfg: &PenaltyConfig,
    term: ClusterTerm,
) -> Result<QuboInstance> {
    check_sizes(topo.node_count(), w.len(), k, cfg)?;
    assemble(&term.matrix(topo), w, k, cfg)
}

/// Equal-demand QUBO over the combinatorial Laplacian with target size `n/k`.
pub fn build_unweighted_qubo(topo: &Topology, k: usize, cfg: &PenaltyConfig) -> Result<QuboInstance> {
    let n = topo.node_count();
    check_sizes(n, n, k, cfg)?;
    assemble(&laplacian(topo), &vec![1.0; n], k, cfg)
}
