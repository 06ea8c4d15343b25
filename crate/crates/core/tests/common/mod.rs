//! Shared fixtures and independent oracles for the integration tests.

#![allow(dead_code)]

use dhn_fairness::graph::{ring, tree, DistanceRule, Topology};
use dhn_fairness::qubo::{ClusterTerm, PenaltyConfig};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SIZE: usize = 20;

/// Small seeded topologies: rings with up to two chords and trees of
/// branching 2 or 3, `n` cycling through 3..=8.
pub fn suite_topology(i: usize) -> Topology {
    let n = 3 + i % 6;
    let rule = DistanceRule::Uniform { min: 0.5, max: 2.0 };
    if i.is_multiple_of(2) {
        let max_chords = n * (n - 1) / 2 - n;
        ring(n, (i / 2 % 3).min(max_chords), rule, i as u64).unwrap()
    } else {
        tree(n, 2 + i / 2 % 2, rule, i as u64).unwrap()
    }
}

pub fn suite() -> Vec<Topology> {
    (0..SUITE_SIZE).map(suite_topology).collect()
}

/// Positive seeded weights summing to one.
pub fn suite_weights(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

/// `-(I D I^T)` with the diagonal zeroed, built from an explicit incidence
/// product (or `I D I^T` itself for the weighted Laplacian).
pub fn cluster_matrix_oracle(topo: &Topology, term: ClusterTerm) -> Array2<f64> {
    let (n, m) = (topo.node_count(), topo.edge_count());
    let mut inc = Array2::<f64>::zeros((n, m));
    let mut d = Array2::<f64>::zeros((m, m));
    for (c, e) in topo.edges().iter().enumerate() {
        // Opposite orientation to the library on purpose.
        inc[[e.a.max(e.b), c]] = 1.0;
        inc[[e.a.min(e.b), c]] = -1.0;
        d[[c, c]] = e.distance;
    }
    let product = inc.dot(&d).dot(&inc.t());
    match term {
        ClusterTerm::DistanceLaplacian => {
            let mut out = -product;
            for i in 0..n {
                out[[i, i]] = 0.0;
            }
            out
        }
        ClusterTerm::WeightedLaplacian => product,
    }
}

/// The modified cost function evaluated term by term on a bit matrix
/// `x[i][j]`.
pub fn direct_cost(
    m: &Array2<f64>,
    w: &[f64],
    k: usize,
    cfg: &PenaltyConfig,
    x: &[Vec<bool>],
) -> f64 {
    let n = w.len();
    let b = |i: usize, j: usize| if x[i][j] { 1.0 } else { 0.0 };
    let target = w.iter().sum::<f64>() / k as f64;
    let mut cluster = 0.0;
    for j in 0..k {
        for i in 0..n {
            for i2 in 0..n {
                cluster += b(i, j) * m[[i, i2]] * b(i2, j);
            }
        }
    }
    let mut balance = 0.0;
    for j in 0..k {
        let load: f64 = (0..n).map(|i| w[i] * b(i, j)).sum();
        balance += cfg.alpha.at(j) * (load - target).powi(2);
    }
    let mut onehot = 0.0;
    for i in 0..n {
        let count: f64 = (0..k).map(|j| b(i, j)).sum();
        onehot += cfg.gamma.at(i) * (count - 1.0).powi(2);
    }
    cfg.beta * cluster + balance + onehot
}

/// Bit matrix `x[i][j]` of a flat vector in the stacked layout.
pub fn unflatten(bits: &[bool], n: usize, k: usize) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..k).map(|j| bits[j * n + i]).collect()).collect()
}

pub fn bits_of(mask: u64, len: usize) -> Vec<bool> {
    (0..len).map(|b| mask >> b & 1 == 1).collect()
}

pub fn is_one_hot(bits: &[bool], n: usize, k: usize) -> bool {
    (0..n).all(|i| (0..k).filter(|&j| bits[j * n + i]).count() == 1)
}

/// All-pairs shortest paths by enumerating simple paths; only for tiny graphs.
pub fn brute_force_paths(topo: &Topology) -> Vec<Vec<f64>> {
    let n = topo.node_count();
    let adj = topo.adjacency();
    let mut best = vec![vec![f64::INFINITY; n]; n];
    fn walk(u: usize, dist: f64, seen: &mut Vec<bool>, adj: &[Vec<(usize, f64)>], row: &mut [f64]) {
        if dist < row[u] {
            row[u] = dist;
        }
        for &(v, d) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                walk(v, dist + d, seen, adj, row);
                seen[v] = false;
            }
        }
    }
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        walk(s, 0.0, &mut seen, &adj, &mut best[s]);
    }
    best
}

/// Minimum of `energy` over every producer vector in `0..k`^n.
pub fn brute_force_feasible<F: FnMut(&[usize]) -> f64>(n: usize, k: usize, mut energy: F) -> (f64, Vec<usize>) {
    let total = k.pow(n as u32);
    let mut best = (f64::INFINITY, Vec::new());
    for code in 0..total {
        let mut c = code;
        let p: Vec<usize> = (0..n)
            .map(|_| {
                let d = c % k;
                c /= k;
                d
            })
            .collect();
        let e = energy(&p);
        if e < best.0 {
            best = (e, p);
        }
    }
    best
}
