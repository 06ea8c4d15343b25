use ndarray::Array2;

use super::Topology;
use crate::error::{Error, Result};

/// All-pairs shortest path lengths by pipe distance.
///
/// Unreachable pairs hold `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    dist: Array2<f64>,
}

impl ShortestPaths {
    /// Floyd-Warshall over the edge distances.
    pub fn new(topo: &Topology) -> Self {
        let n = topo.node_count();
        let mut dist = Array2::from_elem((n, n), f64::INFINITY);
        for i in 0..n {
            dist[[i, i]] = 0.0;
        }
        for e in topo.edges() {
            dist[[e.a, e.b]] = dist[[e.a, e.b]].min(e.distance);
            dist[[e.b, e.a]] = dist[[e.b, e.a]].min(e.distance);
        }
        for via in 0..n {
            for i in 0..n {
                let d_iv = dist[[i, via]];
                if d_iv.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let candidate = d_iv + dist[[via, j]];
                    if candidate < dist[[i, j]] {
                        dist[[i, j]] = candidate;
                    }
                }
            }
        }
        ShortestPaths { dist }
    }

    pub fn node_count(&self) -> usize {
        self.dist.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[[i, j]]
    }

    pub fn is_reachable(&self, i: usize, j: usize) -> bool {
        self.dist[[i, j]].is_finite()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.dist
    }

    /// Errors with the first unreachable pair.
    pub fn require_connected(&self) -> Result<()> {
        let n = self.node_count();
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.is_reachable(i, j) {
                    return Err(Error::Disconnected { from: i, to: j });
                }
            }
        }
        Ok(())
    }

    /// Sum of shortest-path lengths over all unordered node pairs.
    pub fn total_pairwise(&self) -> f64 {
        let n = self.node_count();
        let mut total = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                total += self.dist[[i, j]];
            }
        }
        total
    }
}
