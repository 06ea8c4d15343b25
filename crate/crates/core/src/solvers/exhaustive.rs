use std::time::Instant;

use super::{Assignment, SolveResult};
use crate::error::{Error, Result};
use crate::qubo::QuboInstance;

/// Largest `n * k` accepted by [`solve_exhaustive`].
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

pub fn solve_exhaustive(q: &QuboInstance) -> Result<SolveResult> {
    solve_exhaustive_with_cap(q, DEFAULT_EXHAUSTIVE_CAP)
}

/// Global minimum over all `k^n` one-hot assignments.
///
/// Assignments are visited in lexicographic order of the producer vector and
/// only a strictly lower energy (beyond a relative `1e-12` slack) replaces
/// the incumbent, so ties resolve to the lexicographically smallest vector.
pub fn solve_exhaustive_with_cap(q: &QuboInstance, cap: usize) -> Result<SolveResult> {
    let index = q.index();
    if index.len() > cap {
        return Err(Error::SizeCapExceeded {
            vars: index.len(),
            cap,
        });
    }
    let start = Instant::now();
    let (n, k) = (index.nodes(), index.producers());
    let vars = index.len();

    let mut dense = vec![0.0; vars * vars];
    for (&v, &c) in q.linear() {
        dense[v * vars + v] = c;
    }
    for (&(a, b), &c) in q.quadratic() {
        dense[a * vars + b] = c;
        dense[b * vars + a] = c;
    }
    let energy_of = |producer_of: &[usize]| -> f64 {
        let active: Vec<usize> = producer_of
            .iter()
            .enumerate()
            .map(|(i, &p)| index.var(i, p))
            .collect();
        let mut e = q.offset();
        for (pos, &a) in active.iter().enumerate() {
            e += dense[a * vars + a];
            for &b in &active[pos + 1..] {
                e += dense[a * vars + b];
            }
        }
        e
    };

    let mut current = vec![0usize; n];
    let mut best = current.clone();
    let mut best_energy = energy_of(&current);
    let mut evaluated: u64 = 1;
    loop {
        // Odometer increment, last node fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                let assignment = Assignment::new(best, k)?;
                return Ok(SolveResult {
                    assignment,
                    energy: best_energy,
                    solver: "exhaustive".into(),
                    seed: 0,
                    iterations: evaluated,
                    wall_time_secs: start.elapsed().as_secs_f64(),
                });
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < k {
                break;
            }
            current[pos] = 0;
        }
        let e = energy_of(&current);
        evaluated += 1;
        if e < best_energy - 1e-12 * best_energy.abs().max(1.0) {
            best_energy = e;
            best.copy_from_slice(&current);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Topology;
    use crate::qubo::{build_qubo, default_penalties, PenaltyConfig};
    use crate::solvers::encode;

    #[test]
    fn single_node() {
        let t = Topology::from_edges(1, []).unwrap();
        let q = build_qubo(&t, &[1.0], 1, &PenaltyConfig::uniform(1.0, 1.0, 1.0)).unwrap();
        let r = solve_exhaustive(&q).unwrap();
        assert_eq!(r.assignment.producer_of(), &[0]);
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn unit_edge_is_split() {
        let t = Topology::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let w = [0.5, 0.5];
        let q = build_qubo(&t, &w, 2, &default_penalties(&t, &w, 2)).unwrap();
        let r = solve_exhaustive(&q).unwrap();
        assert_eq!(r.assignment.producer_of(), &[0, 1]);
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.iterations, 4);
    }

    #[test]
    fn reported_energy_matches_instance() {
        let t = Topology::from_edges(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 4, 1.5), (4, 0, 1.0)]).unwrap();
        let w = [0.1, 0.3, 0.2, 0.25, 0.15];
        let q = build_qubo(&t, &w, 3, &default_penalties(&t, &w, 3)).unwrap();
        let r = solve_exhaustive(&q).unwrap();
        let recomputed = q.energy(&encode(&r.assignment, &q).unwrap()).unwrap();
        assert!((recomputed - r.energy).abs() <= 1e-9 * recomputed.abs().max(1.0));
        assert_eq!(r.iterations, 243);
    }

    #[test]
    fn cap_is_enforced() {
        let t = Topology::from_edges(5, []).unwrap();
        let w = [0.2; 5];
        let q = build_qubo(&t, &w, 5, &default_penalties(&t, &w, 5)).unwrap();
        assert!(matches!(
            solve_exhaustive(&q),
            Err(Error::SizeCapExceeded { vars: 25, cap: 24 })
        ));
        assert!(solve_exhaustive_with_cap(&q, 25).is_ok());
    }
}
