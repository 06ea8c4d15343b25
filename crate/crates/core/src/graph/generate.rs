//! Synthetic tree-like and ring-like topologies.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Edge, Node, NodeId, Topology};
use crate::error::{Error, Result};

/// How generated pipes get their lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DistanceRule {
    Constant { distance: f64 },
    /// Uniformly drawn from `[min, max]` per edge.
    Uniform { min: f64, max: f64 },
}

impl DistanceRule {
    pub fn unit() -> Self {
        DistanceRule::Constant { distance: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DistanceRule::Constant { distance } if distance.is_finite() && distance > 0.0 => Ok(()),
            DistanceRule::Uniform { min, max } if min.is_finite() && max.is_finite() && 0.0 < min && min <= max => {
                Ok(())
            }
            other => Err(Error::InvalidParameter(format!(
                "distance rule {other:?} must produce finite positive distances"
            ))),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            DistanceRule::Constant { distance } => distance,
            DistanceRule::Uniform { min, max } if min == max => min,
            DistanceRule::Uniform { min, max } => rng.random_range(min..=max),
        }
    }
}

impl Default for DistanceRule {
    fn default() -> Self {
        DistanceRule::unit()
    }
}

/// Breadth-first `branching`-ary tree: node `i > 0` hangs off `(i - 1) / branching`.
pub fn tree(n: usize, branching: usize, rule: DistanceRule, seed: u64) -> Result<Topology> {
    if n == 0 {
        return Err(Error::InvalidParameter("tree needs at least one node".into()));
    }
    if branching == 0 {
        return Err(Error::InvalidParameter("tree branching must be at least 1".into()));
    }
    rule.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut depth = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    for child in 1..n {
        let parent = (child - 1) / branching;
        depth[child] = depth[parent] + 1;
        edges.push(Edge::new(parent, child, rule.sample(&mut rng)));
    }

    // Layered layout: one row per depth, nodes spread evenly along it.
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let mut per_level = vec![Vec::new(); max_depth + 1];
    for (i, &d) in depth.iter().enumerate() {
        per_level[d].push(i);
    }
    let mut nodes = vec![Node::default(); n];
    for (d, members) in per_level.iter().enumerate() {
        let width = members.len() as f64;
        for (slot, &i) in members.iter().enumerate() {
            nodes[i] = Node {
                label: Some(format!("c{i}")),
                position: Some(((slot as f64 + 0.5) / width * 100.0, -(d as f64) * 25.0)),
            };
        }
    }
    Topology::new(nodes, edges)
}

/// Hamiltonian cycle `0-1-...-(n-1)-0` plus `chords` distinct random chords.
pub fn ring(n: usize, chords: usize, rule: DistanceRule, seed: u64) -> Result<Topology> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring needs at least 3 nodes, got {n}")));
    }
    let max_chords = n * (n - 1) / 2 - n;
    if chords > max_chords {
        return Err(Error::InvalidParameter(format!(
            "{chords} chords requested but a {n}-node ring admits at most {max_chords}"
        )));
    }
    rule.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut edges: Vec<Edge> = (0..n)
        .map(|i| Edge::new(i, (i + 1) % n, rule.sample(&mut rng)))
        .collect();

    let mut candidates: Vec<(NodeId, NodeId)> = (0..n)
        .flat_map(|a| ((a + 2)..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !(a == 0 && b == n - 1))
        .collect();
    candidates.shuffle(&mut rng);
    let mut picked: Vec<(NodeId, NodeId)> = candidates.into_iter().take(chords).collect();
    picked.sort_unstable();
    for (a, b) in picked {
        edges.push(Edge::new(a, b, rule.sample(&mut rng)));
    }

    let nodes = (0..n)
        .map(|i| {
            let angle = TAU * i as f64 / n as f64;
            Node {
                label: Some(format!("c{i}")),
                position: Some((50.0 * angle.cos(), 50.0 * angle.sin())),
            }
        })
        .collect();
    Topology::new(nodes, edges)
}
