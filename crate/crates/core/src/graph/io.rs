//! JSON topology files.
//!
//! ```json
//! {
//!   "nodes": [{"id": 0, "label": "c0", "x": 12.5, "y": -3.0}, {"id": 1}],
//!   "edges": [{"a": 0, "b": 1, "distance": 140.0}]
//! }
//! ```
//!
//! Node ids must be exactly `0..n` (in any order). `label`, `x` and `y` are
//! optional; `x` and `y` come as a pair. Distances are meters.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Edge, Node, Topology};
use crate::error::{Error, Result};
use crate::util::write_atomic;

#[derive(Debug, Serialize, Deserialize)]
struct TopologyFile {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRecord {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    a: usize,
    b: usize,
    distance: f64,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

/// Parse a topology document. With `strict`, unknown fields are rejected.
pub fn parse_topology(text: &str, strict: bool) -> Result<Topology> {
    let file: TopologyFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidTopology(format!("line {}, column {}: {e}", e.line(), e.column())))?;

    if strict {
        let unknown = |what: String, extra: &BTreeMap<String, Value>| -> Result<()> {
            match extra.keys().next() {
                Some(key) => Err(Error::InvalidTopology(format!("{what}: unknown field `{key}`"))),
                None => Ok(()),
            }
        };
        unknown("document".into(), &file.extra)?;
        for (pos, n) in file.nodes.iter().enumerate() {
            unknown(format!("nodes[{pos}]"), &n.extra)?;
        }
        for (pos, e) in file.edges.iter().enumerate() {
            unknown(format!("edges[{pos}]"), &e.extra)?;
        }
    }

    let n = file.nodes.len();
    let mut slots: Vec<Option<Node>> = vec![None; n];
    for (pos, rec) in file.nodes.into_iter().enumerate() {
        if rec.id >= n {
            return Err(Error::InvalidTopology(format!(
                "nodes[{pos}]: id {} outside dense range 0..{n}",
                rec.id
            )));
        }
        if slots[rec.id].is_some() {
            return Err(Error::InvalidTopology(format!("nodes[{pos}]: duplicate id {}", rec.id)));
        }
        let position = match (rec.x, rec.y) {
            (Some(x), Some(y)) => Some((x, y)),
            (None, None) => None,
            _ => {
                return Err(Error::InvalidTopology(format!(
                    "nodes[{pos}] (id {}): x and y must be given together",
                    rec.id
                )))
            }
        };
        slots[rec.id] = Some(Node {
            label: rec.label,
            position,
        });
    }
    let nodes = slots.into_iter().map(|n| n.expect("ids are a permutation")).collect();
    let edges = file
        .edges
        .into_iter()
        .map(|e| Edge::new(e.a, e.b, e.distance))
        .collect();
    Topology::new(nodes, edges)
}

/// Pretty-printed JSON document for `topo`.
pub fn topology_to_string(topo: &Topology) -> String {
    let file = TopologyFile {
        nodes: topo
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| NodeRecord {
                id,
                label: n.label.clone(),
                x: n.position.map(|p| p.0),
                y: n.position.map(|p| p.1),
                extra: BTreeMap::new(),
            })
            .collect(),
        edges: topo
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                a: e.a,
                b: e.b,
                distance: e.distance,
                extra: BTreeMap::new(),
            })
            .collect(),
        extra: BTreeMap::new(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("topology serializes");
    s.push('\n');
    s
}

pub fn load_topology(path: impl AsRef<Path>, strict: bool) -> Result<Topology> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_topology(&text, strict).map_err(|e| match e {
        Error::InvalidTopology(msg) => Error::InvalidTopology(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_topology(topo: &Topology, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), topology_to_string(topo).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_two_node_file() {
        let t = parse_topology(
            r#"{"nodes":[{"id":0},{"id":1}],"edges":[{"a":0,"b":1,"distance":2.5}]}"#,
            true,
        )
        .unwrap();
        assert_eq!(t.node_count(), 2);
        assert_eq!(t.edge_count(), 1);
        assert_eq!(t.edges()[0].distance, 2.5);
    }

    #[test]
    fn self_loop_is_named() {
        let err = parse_topology(
            r#"{"nodes":[{"id":0},{"id":1}],"edges":[{"a":0,"b":1,"distance":1},{"a":1,"b":1,"distance":1}]}"#,
            false,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("edge 1 (1-1)") && msg.contains("self-loop"), "{msg}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_topology("{\n  \"nodes\": [\n    {\"id\": 0,}\n  ]\n}", false).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn strict_rejects_unknown_fields() {
        let text = r#"{"nodes":[{"id":0,"colour":"red"}],"edges":[]}"#;
        assert!(parse_topology(text, false).is_ok());
        let err = parse_topology(text, true).unwrap_err();
        assert!(err.to_string().contains("nodes[0]: unknown field `colour`"), "{err}");

        let text = r#"{"nodes":[{"id":0}],"edges":[],"version":2}"#;
        assert!(parse_topology(text, true).is_err());
    }

    #[test]
    fn ids_must_be_dense_and_unique() {
        assert!(parse_topology(r#"{"nodes":[{"id":0},{"id":2}],"edges":[]}"#, false).is_err());
        assert!(parse_topology(r#"{"nodes":[{"id":0},{"id":0}],"edges":[]}"#, false).is_err());
        let t = parse_topology(r#"{"nodes":[{"id":1,"label":"b"},{"id":0,"label":"a"}],"edges":[]}"#, false).unwrap();
        assert_eq!(t.label(0), "a");
    }

    #[test]
    fn half_coordinates_rejected() {
        assert!(parse_topology(r#"{"nodes":[{"id":0,"x":1.0}],"edges":[]}"#, false).is_err());
    }

    #[test]
    fn string_round_trip_keeps_awkward_floats() {
        let t = Topology::new(
            vec![
                Node { label: Some("a".into()), position: Some((0.1, -1e-300)) },
                Node::default(),
            ],
            vec![Edge::new(0, 1, 0.1 + 0.2)],
        )
        .unwrap();
        assert_eq!(parse_topology(&topology_to_string(&t), true).unwrap(), t);
    }
}
