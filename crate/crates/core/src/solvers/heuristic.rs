use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Assignment, SolveResult};
use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::qubo::{ClusterTerm, PenaltyConfig};
use crate::util::mix_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeuristicConfig {
    /// Independent greedy seedings; the first uses plain heaviest-first order.
    pub starts: usize,
    pub seed: u64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig { starts: 8, seed: 0 }
    }
}

/// The partition cost evaluated on feasible assignments, where the one-hot
/// penalty vanishes:
///
/// `beta * sum_j x_j^T M x_j + sum_j alpha_j (load_j - W/k)^2`
///
/// With the distance Laplacian every pipe inside a producer costs
/// `2 * beta * distance`; with the weighted Laplacian every pipe between
/// producers does, which equals a constant minus the internal pipes.
#[derive(Debug, Clone)]
pub struct CostModel {
    adjacency: Vec<Vec<(usize, f64)>>,
    weights: Vec<f64>,
    alpha: Vec<f64>,
    /// Cost per unit of internal pipe distance.
    pipe: f64,
    constant: f64,
    target: f64,
    k: usize,
}

impl CostModel {
    pub fn new(topo: &Topology, w: &[f64], k: usize, cfg: &PenaltyConfig, term: ClusterTerm) -> Result<Self> {
        let n = topo.node_count();
        if w.len() != n {
            return Err(Error::DimensionMismatch(format!("{} weights for {n} nodes", w.len())));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("producer count k = {k} must lie in 1..={n}")));
        }
        cfg.validate(n, k)?;
        Ok(CostModel {
            adjacency: topo.adjacency(),
            weights: w.to_vec(),
            alpha: (0..k).map(|j| cfg.alpha.at(j)).collect(),
            pipe: match term {
                ClusterTerm::DistanceLaplacian => 2.0 * cfg.beta,
                ClusterTerm::WeightedLaplacian => -2.0 * cfg.beta,
            },
            constant: match term {
                ClusterTerm::DistanceLaplacian => 0.0,
                ClusterTerm::WeightedLaplacian => 2.0 * cfg.beta * topo.total_distance(),
            },
            target: w.iter().sum::<f64>() / k as f64,
            k,
        })
    }

    pub fn loads(&self, a: &Assignment) -> Vec<f64> {
        let mut loads = vec![0.0; self.k];
        for (i, &p) in a.producer_of().iter().enumerate() {
            loads[p] += self.weights[i];
        }
        loads
    }

    pub fn cost(&self, a: &Assignment) -> f64 {
        let p = a.producer_of();
        let mut internal = 0.0;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &(v, d) in nbrs {
                if u < v && p[u] == p[v] {
                    internal += d;
                }
            }
        }
        let balance: f64 = self
            .loads(a)
            .iter()
            .zip(&self.alpha)
            .map(|(l, a)| a * (l - self.target).powi(2))
            .sum();
        self.constant + self.pipe * internal + balance
    }

    fn balance_delta(&self, j: usize, load: f64, change: f64) -> f64 {
        let before = load - self.target;
        let after = before + change;
        self.alpha[j] * (after * after - before * before)
    }

    /// Pipe distance from `u` to members of producer `j`, excluding `skip`.
    fn attached(&self, p: &[usize], u: usize, j: usize, skip: usize) -> f64 {
        self.adjacency[u]
            .iter()
            .filter(|&&(v, _)| v != skip && p[v] == j)
            .map(|&(_, d)| d)
            .sum()
    }

    fn relocate_delta(&self, p: &[usize], loads: &[f64], u: usize, to: usize) -> f64 {
        let from = p[u];
        if from == to {
            return 0.0;
        }
        let w = self.weights[u];
        self.pipe * (self.attached(p, u, to, u) - self.attached(p, u, from, u))
            + self.balance_delta(from, loads[from], -w)
            + self.balance_delta(to, loads[to], w)
    }

    fn swap_delta(&self, p: &[usize], loads: &[f64], u: usize, v: usize) -> f64 {
        let (a, b) = (p[u], p[v]);
        let shift = self.weights[v] - self.weights[u];
        let pipes = self.attached(p, u, b, v) - self.attached(p, u, a, u) + self.attached(p, v, a, u)
            - self.attached(p, v, b, v);
        self.pipe * pipes + self.balance_delta(a, loads[a], shift) + self.balance_delta(b, loads[b], -shift)
    }

    /// Insert nodes one by one into the producer with the smallest added cost.
    fn greedy(&self, order: &[usize]) -> Vec<usize> {
        let n = self.weights.len();
        let mut p = vec![usize::MAX; n];
        let mut loads = vec![0.0; self.k];
        for &u in order {
            let mut best = 0;
            let mut best_cost = f64::INFINITY;
            for (j, &load) in loads.iter().enumerate() {
                let c = self.pipe * self.attached(&p, u, j, u) + self.balance_delta(j, load, self.weights[u]);
                if c < best_cost {
                    best_cost = c;
                    best = j;
                }
            }
            p[u] = best;
            loads[best] += self.weights[u];
        }
        p
    }

    /// Best-improvement relocate and swap moves until none lowers the cost.
    /// Returns the number of moves applied.
    fn descend(&self, p: &mut [usize]) -> u64 {
        let n = p.len();
        let eps = 1e-12 * (1.0 + self.alpha.iter().copied().fold(self.pipe.abs(), f64::max));
        let mut loads = vec![0.0; self.k];
        for (i, &j) in p.iter().enumerate() {
            loads[j] += self.weights[i];
        }
        let mut moves = 0;
        loop {
            let mut best = (-eps, None);
            for u in 0..n {
                for to in 0..self.k {
                    if to != p[u] {
                        let d = self.relocate_delta(p, &loads, u, to);
                        if d < best.0 {
                            best = (d, Some((u, to, false)));
                        }
                    }
                }
                for v in (u + 1)..n {
                    if p[u] != p[v] {
                        let d = self.swap_delta(p, &loads, u, v);
                        if d < best.0 {
                            best = (d, Some((u, v, true)));
                        }
                    }
                }
            }
            match best.1 {
                None => return moves,
                Some((u, to, false)) => {
                    loads[p[u]] -= self.weights[u];
                    loads[to] += self.weights[u];
                    p[u] = to;
                }
                Some((u, v, true)) => {
                    let (a, b) = (p[u], p[v]);
                    let shift = self.weights[v] - self.weights[u];
                    loads[a] += shift;
                    loads[b] -= shift;
                    p.swap(u, v);
                }
            }
            moves += 1;
        }
    }

    /// True if no single relocate or swap lowers the cost.
    pub fn is_local_optimum(&self, a: &Assignment) -> bool {
        let mut p = a.producer_of().to_vec();
        self.descend(&mut p) == 0
    }
}

/// Multi-start greedy seeding and local search on the partition cost.
pub fn solve_heuristic(
    topo: &Topology,
    w: &[f64],
    k: usize,
    penalties: &PenaltyConfig,
    term: ClusterTerm,
    cfg: &HeuristicConfig,
) -> Result<SolveResult> {
    if cfg.starts == 0 {
        return Err(Error::InvalidParameter("heuristic needs at least one start".into()));
    }
    let start = Instant::now();
    let model = CostModel::new(topo, w, k, penalties, term)?;
    let n = w.len();

    let mut heaviest_first: Vec<usize> = (0..n).collect();
    heaviest_first.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));

    let mut best: Option<(f64, Assignment)> = None;
    let mut moves = 0;
    for s in 0..cfg.starts {
        let mut order = heaviest_first.clone();
        if s > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, s as u64));
            order.shuffle(&mut rng);
        }
        let mut p = model.greedy(&order);
        moves += model.descend(&mut p);
        let a = Assignment::new(p, k)?;
        let c = model.cost(&a);
        if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
            best = Some((c, a));
        }
    }
    let (energy, assignment) = best.expect("at least one start");
    Ok(SolveResult {
        assignment,
        energy,
        solver: "heuristic".into(),
        seed: cfg.seed,
        iterations: moves,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{build_qubo, build_qubo_with, default_penalties};
    use crate::solvers::{encode, solve_exhaustive};

    #[test]
    fn single_producer() {
        let t = Topology::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let w = [0.2, 0.3, 0.5];
        let r = solve_heuristic(&t, &w, 1, &default_penalties(&t, &w, 1), ClusterTerm::default(), &HeuristicConfig::default()).unwrap();
        assert_eq!(r.assignment.producer_of(), &[0, 0, 0]);
    }

    #[test]
    fn cost_matches_qubo_energy() {
        let t = Topology::from_edges(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 4, 1.5), (0, 3, 1.0)]).unwrap();
        let w = [0.1, 0.3, 0.2, 0.25, 0.15];
        let cfg = default_penalties(&t, &w, 3);
        for term in [ClusterTerm::DistanceLaplacian, ClusterTerm::WeightedLaplacian] {
            let q = build_qubo_with(&t, &w, 3, &cfg, term).unwrap();
            let model = CostModel::new(&t, &w, 3, &cfg, term).unwrap();
            for p in [[0, 0, 0, 0, 0], [0, 1, 2, 0, 1], [2, 2, 1, 0, 0]] {
                let a = Assignment::new(p.to_vec(), 3).unwrap();
                let e = q.energy(&encode(&a, &q).unwrap()).unwrap();
                assert!((model.cost(&a) - e).abs() < 1e-9 * e.abs().max(1.0));
            }
        }
    }

    #[test]
    fn move_deltas_match_recomputation() {
        let t = Topology::from_edges(6, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 4, 1.5), (4, 5, 1.0), (5, 0, 0.7), (1, 4, 0.3)])
            .unwrap();
        let w = [0.1, 0.3, 0.2, 0.15, 0.15, 0.1];
        let model = CostModel::new(&t, &w, 3, &default_penalties(&t, &w, 3), ClusterTerm::WeightedLaplacian).unwrap();
        let p = vec![0, 1, 2, 0, 1, 2];
        let a = Assignment::new(p.clone(), 3).unwrap();
        let loads = model.loads(&a);
        let base = model.cost(&a);
        for u in 0..6 {
            for to in 0..3 {
                let mut q = p.clone();
                q[u] = to;
                let d = model.cost(&Assignment::new(q, 3).unwrap()) - base;
                assert!((model.relocate_delta(&p, &loads, u, to) - d).abs() < 1e-9);
            }
            for v in 0..6 {
                if p[u] != p[v] {
                    let mut q = p.clone();
                    q.swap(u, v);
                    let d = model.cost(&Assignment::new(q, 3).unwrap()) - base;
                    assert!((model.swap_delta(&p, &loads, u, v) - d).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn path_matches_exhaustive_and_is_local_optimum() {
        let t = Topology::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let w = [0.25; 4];
        let cfg = default_penalties(&t, &w, 2);
        let r = solve_heuristic(&t, &w, 2, &cfg, ClusterTerm::default(), &HeuristicConfig::default()).unwrap();
        let exact = solve_exhaustive(&build_qubo(&t, &w, 2, &cfg).unwrap()).unwrap();
        assert!((r.energy - exact.energy).abs() < 1e-9);
        assert!(CostModel::new(&t, &w, 2, &cfg, ClusterTerm::default()).unwrap().is_local_optimum(&r.assignment));
    }

    #[test]
    fn deterministic_per_seed() {
        let t = crate::graph::ring(12, 2, crate::graph::DistanceRule::Uniform { min: 0.5, max: 2.0 }, 3).unwrap();
        let w: Vec<f64> = (1..=12).map(|i| i as f64 / 78.0).collect();
        let cfg = default_penalties(&t, &w, 3);
        let h = HeuristicConfig { starts: 4, seed: 9 };
        let mut a = solve_heuristic(&t, &w, 3, &cfg, ClusterTerm::default(), &h).unwrap();
        let mut b = solve_heuristic(&t, &w, 3, &cfg, ClusterTerm::default(), &h).unwrap();
        a.wall_time_secs = 0.0;
        b.wall_time_secs = 0.0;
        assert_eq!(a, b);
    }

    #[test]
    fn weighted_term_splits_path_in_halves() {
        let t = Topology::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let w = [0.25; 4];
        let cfg = default_penalties(&t, &w, 2);
        let r = solve_heuristic(&t, &w, 2, &cfg, ClusterTerm::WeightedLaplacian, &HeuristicConfig::default()).unwrap();
        assert_eq!(r.assignment.canonical().producer_of(), &[0, 0, 1, 1]);
        assert!((r.energy - 2.0).abs() < 1e-12);
    }
}
