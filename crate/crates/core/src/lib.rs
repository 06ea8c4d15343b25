//! Producer fairness evaluation for district heating network topologies.
//!
//! Consumers are partitioned among `k` producers by minimizing a QUBO that
//! balances weighted demand per producer while penalizing pipe distance
//! inside each producer's cluster. The resulting assignments are scored with
//! the Jain fairness index, a shortest-path distance index and their convex
//! combination, for every `k` up to a chosen maximum.

pub mod demand;
pub mod error;
pub mod fairness;
pub mod graph;
pub mod qubo;
pub mod solvers;
pub mod util;
pub mod workflow;

pub use error::{Error, Result};
