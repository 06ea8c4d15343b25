//! Dense graph matrices.
//!
//! The incidence matrix orients every edge from its lower-indexed endpoint
//! (+1) to its higher-indexed endpoint (-1). The matrices built from it do
//! not depend on the orientation.

use ndarray::{Array1, Array2};

use super::Topology;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphMatrices {
    pub laplacian: Array2<f64>,
    pub incidence: Array2<f64>,
    pub edge_distances: Array2<f64>,
    pub distance_laplacian: Array2<f64>,
}

impl GraphMatrices {
    pub fn new(topo: &Topology) -> Self {
        let incidence = incidence(topo);
        let edge_distances = edge_distance_diagonal(topo);
        let distance_laplacian = off_diagonal_of_negated_product(&incidence, &edge_distances);
        GraphMatrices {
            laplacian: laplacian(topo),
            incidence,
            edge_distances,
            distance_laplacian,
        }
    }
}

/// Combinatorial Laplacian: degree on the diagonal, -1 per edge.
pub fn laplacian(topo: &Topology) -> Array2<f64> {
    let n = topo.node_count();
    let mut l = Array2::zeros((n, n));
    for e in topo.edges() {
        l[[e.a, e.b]] -= 1.0;
        l[[e.b, e.a]] -= 1.0;
        l[[e.a, e.a]] += 1.0;
        l[[e.b, e.b]] += 1.0;
    }
    l
}

/// Zero-diagonal matrix holding the pipe distance for every adjacent pair.
pub fn distance_laplacian(topo: &Topology) -> Array2<f64> {
    let n = topo.node_count();
    let mut dl = Array2::zeros((n, n));
    for e in topo.edges() {
        dl[[e.a, e.b]] = e.distance;
        dl[[e.b, e.a]] = e.distance;
    }
    dl
}

/// Distance-weighted Laplacian `I D I^T`: weighted degree on the diagonal,
/// minus the pipe distance per edge.
pub fn weighted_laplacian(topo: &Topology) -> Array2<f64> {
    let n = topo.node_count();
    let mut l = Array2::zeros((n, n));
    for e in topo.edges() {
        l[[e.a, e.b]] -= e.distance;
        l[[e.b, e.a]] -= e.distance;
        l[[e.a, e.a]] += e.distance;
        l[[e.b, e.b]] += e.distance;
    }
    l
}

/// Signed node-by-edge incidence matrix.
pub fn incidence(topo: &Topology) -> Array2<f64> {
    let mut inc = Array2::zeros((topo.node_count(), topo.edge_count()));
    for (col, e) in topo.edges().iter().enumerate() {
        let (lo, hi) = e.key();
        inc[[lo, col]] = 1.0;
        inc[[hi, col]] = -1.0;
    }
    inc
}

pub fn edge_distance_diagonal(topo: &Topology) -> Array2<f64> {
    let d: Array1<f64> = topo.edges().iter().map(|e| e.distance).collect();
    Array2::from_diag(&d)
}

/// Off-diagonal part of `-(I D I^T)`, diagonal zeroed.
pub fn off_diagonal_of_negated_product(incidence: &Array2<f64>, diag: &Array2<f64>) -> Array2<f64> {
    let mut m = -incidence.dot(diag).dot(&incidence.t());
    m.diag_mut().fill(0.0);
    m
}

/// Largest row sum of a matrix.
pub fn max_row_sum(m: &Array2<f64>) -> f64 {
    m.rows()
        .into_iter()
        .map(|r| r.sum())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use ndarray::array;

    use super::*;

    #[test]
    fn weighted_laplacian_is_incidence_product() {
        let t = Topology::from_edges(4, [(0, 1, 1.5), (1, 2, 0.5), (2, 3, 2.0), (3, 0, 1.0), (0, 2, 0.25)]).unwrap();
        let inc = incidence(&t);
        let product = inc.dot(&edge_distance_diagonal(&t)).dot(&inc.t());
        assert_eq!(weighted_laplacian(&t), product);
        let unit = Topology::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(weighted_laplacian(&unit), laplacian(&unit));
    }

    #[test]
    fn single_node_laplacian() {
        let t = Topology::from_edges(1, []).unwrap();
        assert_eq!(laplacian(&t), array![[0.0]]);
    }

    #[test]
    fn path_laplacian() {
        let t = Topology::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(
            laplacian(&t),
            array![[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]
        );
    }

    #[test]
    fn triangle_laplacian() {
        let t = Topology::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let l = laplacian(&t);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l[[i, j]], if i == j { 2.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn single_edge_distance_laplacian() {
        let t = Topology::from_edges(2, [(0, 1, 3.5)]).unwrap();
        assert_eq!(distance_laplacian(&t), array![[0.0, 3.5], [3.5, 0.0]]);
    }

    #[test]
    fn path_distance_laplacian() {
        let t = Topology::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let dl = distance_laplacian(&t);
        assert_eq!(dl[[0, 1]], 1.0);
        assert_eq!(dl[[1, 2]], 2.0);
        assert_eq!(dl[[0, 2]], 0.0);
        assert_eq!(dl.diag().sum(), 0.0);
    }

    #[test]
    fn incidence_columns_sum_to_zero() {
        let t = Topology::from_edges(4, [(2, 0, 1.0), (1, 3, 1.0), (0, 1, 1.0)]).unwrap();
        let inc = incidence(&t);
        for col in inc.columns() {
            assert_eq!(col.sum(), 0.0);
            assert_eq!(col.iter().filter(|v| **v != 0.0).count(), 2);
        }
        assert_eq!(inc[[0, 0]], 1.0);
        assert_eq!(inc[[2, 0]], -1.0);
    }

    #[test]
    fn matrices_bundle_is_consistent() {
        let t = Topology::from_edges(4, [(0, 1, 1.5), (1, 2, 0.5), (2, 3, 2.0), (3, 0, 1.0)]).unwrap();
        let m = GraphMatrices::new(&t);
        assert_eq!(m.distance_laplacian, distance_laplacian(&t));
        assert_eq!(m.incidence.dim(), (4, 4));
        assert_eq!(max_row_sum(&m.distance_laplacian), 3.0);
    }
}
