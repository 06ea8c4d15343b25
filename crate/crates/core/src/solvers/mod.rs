//! Solvers producing feasible producer assignments.
//!
//! * [`solve_exhaustive`]: enumerates every one-hot assignment; ground truth
//!   for small instances.
//! * [`solve_anneal`]: Metropolis single-bit-flip simulated annealing over
//!   the raw QUBO variables, followed by [`decode_and_repair`].
//! * [`solve_heuristic`]: greedy balanced seeding plus relocate/swap local
//!   search evaluated on the cost function directly.

mod anneal;
mod exhaustive;
mod heuristic;
mod repair;

use serde::{Deserialize, Serialize};

pub use anneal::{solve_anneal, AnnealConfig, Schedule};
pub use exhaustive::{solve_exhaustive, solve_exhaustive_with_cap, DEFAULT_EXHAUSTIVE_CAP};
pub use heuristic::{solve_heuristic, CostModel, HeuristicConfig};
pub use repair::decode_and_repair;

use crate::error::{Error, Result};
use crate::qubo::QuboInstance;

/// Node-to-producer mapping. Producers may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    producer_of: Vec<usize>,
    k: usize,
}

impl Assignment {
    pub fn new(producer_of: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((i, p)) = producer_of.iter().enumerate().find(|(_, p)| **p >= k) {
            return Err(Error::InvalidParameter(format!(
                "node {i} assigned to producer {p}, but k = {k}"
            )));
        }
        Ok(Assignment { producer_of, k })
    }

    pub fn single_producer(n: usize) -> Self {
        Assignment {
            producer_of: vec![0; n],
            k: 1,
        }
    }

    pub fn producer_of(&self) -> &[usize] {
        &self.producer_of
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.producer_of.len()
    }

    /// Members of every producer, in node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.k];
        for (i, &p) in self.producer_of.iter().enumerate() {
            m[p].push(i);
        }
        m
    }

    /// Relabel producers in order of their smallest member node, so that
    /// assignments equal up to producer permutation compare equal.
    pub fn canonical(&self) -> Assignment {
        let mut relabel = vec![usize::MAX; self.k];
        let mut next = 0;
        let producer_of = self
            .producer_of
            .iter()
            .map(|&p| {
                if relabel[p] == usize::MAX {
                    relabel[p] = next;
                    next += 1;
                }
                relabel[p]
            })
            .collect();
        Assignment {
            producer_of,
            k: self.k,
        }
    }
}

/// One-hot bit vector of `a` in the instance's variable layout.
pub fn encode(a: &Assignment, q: &QuboInstance) -> Result<Vec<bool>> {
    let index = q.index();
    if a.node_count() != index.nodes() || a.k() != index.producers() {
        return Err(Error::DimensionMismatch(format!(
            "assignment is {} nodes x {} producers, instance is {} x {}",
            a.node_count(),
            a.k(),
            index.nodes(),
            index.producers()
        )));
    }
    let mut bits = vec![false; index.len()];
    for (i, &p) in a.producer_of().iter().enumerate() {
        bits[index.var(i, p)] = true;
    }
    Ok(bits)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub assignment: Assignment,
    /// QUBO energy of the one-hot encoding of `assignment`.
    pub energy: f64,
    pub solver: String,
    pub seed: u64,
    pub iterations: u64,
    pub wall_time_secs: f64,
}

/// Dense-free view of a QUBO: linear terms and symmetric neighbor lists.
pub(crate) struct Couplings {
    pub linear: Vec<f64>,
    pub neighbors: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    pub fn new(q: &QuboInstance) -> Self {
        let n = q.num_vars();
        let mut linear = vec![0.0; n];
        for (&v, &c) in q.linear() {
            linear[v] = c;
        }
        let mut neighbors = vec![Vec::new(); n];
        for (&(a, b), &c) in q.quadratic() {
            neighbors[a].push((b, c));
            neighbors[b].push((a, c));
        }
        Couplings { linear, neighbors }
    }

    /// `linear[v] + sum_u Q[v,u] b_u`: energy change of switching `v` on
    /// (with `b_v` itself off).
    pub fn field(&self, bits: &[bool], v: usize) -> f64 {
        self.linear[v]
            + self.neighbors[v]
                .iter()
                .filter(|(u, _)| bits[*u])
                .map(|(_, c)| c)
                .sum::<f64>()
    }
}
