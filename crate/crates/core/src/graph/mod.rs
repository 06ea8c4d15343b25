//! Topologies, graph matrices and shortest paths.

mod generate;
mod io;
mod matrices;
mod paths;
mod topology;

pub use generate::{ring, tree, DistanceRule};
pub use io::{load_topology, parse_topology, save_topology, topology_to_string};
pub use matrices::{
    distance_laplacian, edge_distance_diagonal, incidence, laplacian, max_row_sum,
    off_diagonal_of_negated_product, weighted_laplacian, GraphMatrices,
};
pub use paths::ShortestPaths;
pub use topology::{Edge, Node, NodeId, Topology};
