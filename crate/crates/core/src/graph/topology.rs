use std::collections::HashSet;

use crate::error::{Error, Result};

/// Dense node index in `0..n`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Node {
    pub label: Option<String>,
    /// Optional map position in meters. Only used for plotting.
    pub position: Option<(f64, f64)>,
}

/// An undirected pipe between two consumers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    /// Pipe length in meters.
    pub distance: f64,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, distance: f64) -> Self {
        Edge { a, b, distance }
    }

    /// Endpoints ordered as `(low, high)`.
    pub fn key(&self) -> (NodeId, NodeId) {
        if self.a <= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }
}

/// Undirected graph of consumer nodes and candidate pipes.
///
/// Construction validates that there are no self-loops or duplicate
/// undirected edges, that every endpoint exists and that every distance is
/// finite and strictly positive. Instances are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl Topology {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidTopology("topology must have at least one node".into()));
        }
        let n = nodes.len();
        let mut seen = HashSet::with_capacity(edges.len());
        for (idx, e) in edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidTopology(format!(
                    "edge {idx} ({}-{}) references a node outside 0..{n}",
                    e.a, e.b
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidTopology(format!(
                    "edge {idx} ({}-{}) is a self-loop",
                    e.a, e.b
                )));
            }
            if !(e.distance.is_finite() && e.distance > 0.0) {
                return Err(Error::InvalidTopology(format!(
                    "edge {idx} ({}-{}) has non-positive distance {}",
                    e.a, e.b, e.distance
                )));
            }
            if !seen.insert(e.key()) {
                return Err(Error::InvalidTopology(format!(
                    "edge {idx} ({}-{}) duplicates an earlier edge",
                    e.a, e.b
                )));
            }
        }
        Ok(Topology { nodes, edges })
    }

    /// Unlabeled nodes without positions.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId, f64)>) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(a, b, d)| Edge::new(a, b, d))
            .collect();
        Topology::new(vec![Node::default(); n], edges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Label of node `i`, falling back to its index.
    pub fn label(&self, i: NodeId) -> String {
        self.nodes[i]
            .label
            .clone()
            .unwrap_or_else(|| i.to_string())
    }

    pub fn degree(&self, i: NodeId) -> usize {
        self.edges.iter().filter(|e| e.a == i || e.b == i).count()
    }

    /// Adjacency lists of `(neighbor, distance)`.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.distance));
            adj[e.b].push((e.a, e.distance));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    /// First node not reachable from node 0, if any.
    pub(crate) fn first_unreachable(&self) -> Option<NodeId> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn total_distance(&self) -> f64 {
        self.edges.iter().map(|e| e.distance).sum()
    }
}
