use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::repair::repair_with;
use super::{encode, Couplings, SolveResult};
use crate::error::{Error, Result};
use crate::qubo::QuboInstance;
use crate::util::mix_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealConfig {
    pub sweeps: usize,
    pub restarts: usize,
    pub t_initial: f64,
    pub t_final: f64,
    pub schedule: Schedule,
    pub seed: u64,
}

impl AnnealConfig {
    /// Temperatures derived from the instance's coefficients: the hottest
    /// sweep accepts the largest possible single-flip uphill move with
    /// probability 1/2, the coldest accepts the smallest nonzero coefficient
    /// with probability 1/100.
    pub fn for_instance(q: &QuboInstance, sweeps: usize, restarts: usize, seed: u64) -> Self {
        let couplings = Couplings::new(q);
        let max_delta = (0..q.num_vars())
            .map(|v| {
                couplings.linear[v].abs()
                    + couplings.neighbors[v].iter().map(|(_, c)| c.abs()).sum::<f64>()
            })
            .fold(0.0, f64::max);
        let min_coeff = q
            .linear()
            .values()
            .chain(q.quadratic().values())
            .map(|c| c.abs())
            .fold(f64::INFINITY, f64::min);
        let (t_initial, t_final) = if max_delta > 0.0 && min_coeff.is_finite() {
            let hot = max_delta / std::f64::consts::LN_2;
            let cold = (min_coeff / 100f64.ln()).min(hot * 0.5);
            (hot, cold)
        } else {
            (1.0, 0.01)
        };
        AnnealConfig {
            sweeps,
            restarts,
            t_initial,
            t_final,
            schedule: Schedule::Geometric,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(Error::InvalidParameter("sweeps and restarts must be at least 1".into()));
        }
        if !(self.t_final > 0.0 && self.t_initial > self.t_final && self.t_initial.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "temperatures must satisfy t_initial > t_final > 0 (got {} and {})",
                self.t_initial, self.t_final
            )));
        }
        Ok(())
    }

    fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.t_final;
        }
        let s = sweep as f64 / (self.sweeps - 1) as f64;
        match self.schedule {
            Schedule::Geometric => self.t_initial * (self.t_final / self.t_initial).powf(s),
            Schedule::Linear => self.t_initial + (self.t_final - self.t_initial) * s,
        }
    }
}

/// Lowest-energy bit vector seen during one annealing run.
fn anneal_once(couplings: &Couplings, cfg: &AnnealConfig, seed: u64) -> Vec<bool> {
    let vars = couplings.linear.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<bool> = (0..vars).map(|_| rng.random()).collect();
    // field[v] = linear[v] + sum_u Q[v,u] b_u
    let mut field: Vec<f64> = (0..vars).map(|v| couplings.field(&bits, v)).collect();

    let mut energy = 0.0;
    let mut best = bits.clone();
    let mut best_energy = energy;
    for sweep in 0..cfg.sweeps {
        let t = cfg.temperature(sweep);
        for v in 0..vars {
            let delta = if bits[v] { -field[v] } else { field[v] };
            if delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp() {
                bits[v] = !bits[v];
                let sign = if bits[v] { 1.0 } else { -1.0 };
                for &(u, c) in &couplings.neighbors[v] {
                    field[u] += sign * c;
                }
                energy += delta;
                if energy < best_energy {
                    best_energy = energy;
                    best.copy_from_slice(&bits);
                }
            }
        }
    }
    best
}

/// Simulated annealing with independent restarts; the best repaired result
/// wins, earlier restarts winning ties. Restarts run in parallel but each
/// owns a seed derived from `cfg.seed`, so results do not depend on
/// scheduling.
pub fn solve_anneal(q: &QuboInstance, cfg: &AnnealConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let couplings = Couplings::new(q);
    let candidates: Vec<(f64, super::Assignment)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let bits = anneal_once(&couplings, cfg, mix_seed(cfg.seed, r as u64));
            let a = repair_with(q, &couplings, bits);
            let e = q.energy(&encode(&a, q).expect("repaired assignment matches instance"))
                .expect("encoded length matches");
            (e, a)
        })
        .collect();
    let (energy, assignment) = candidates
        .into_iter()
        .reduce(|best, next| if next.0 < best.0 { next } else { best })
        .expect("at least one restart");
    Ok(SolveResult {
        assignment,
        energy,
        solver: "anneal".into(),
        seed: cfg.seed,
        iterations: (cfg.sweeps * cfg.restarts) as u64,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Topology;
    use crate::qubo::{build_qubo, default_penalties, QuboInstance, VarIndex};
    use crate::solvers::solve_exhaustive;

    fn path4() -> QuboInstance {
        let t = Topology::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let w = [0.25; 4];
        build_qubo(&t, &w, 2, &default_penalties(&t, &w, 2)).unwrap()
    }

    #[test]
    fn finds_small_optimum() {
        let q = path4();
        let cfg = AnnealConfig::for_instance(&q, 500, 4, 11);
        let r = solve_anneal(&q, &cfg).unwrap();
        let exact = solve_exhaustive(&q).unwrap();
        assert!((r.energy - exact.energy).abs() < 1e-9, "{} vs {}", r.energy, exact.energy);
        assert_eq!(r.iterations, 2000);
    }

    #[test]
    fn same_seed_same_result() {
        let q = path4();
        let cfg = AnnealConfig::for_instance(&q, 200, 3, 5);
        let mut a = solve_anneal(&q, &cfg).unwrap();
        let mut b = solve_anneal(&q, &cfg).unwrap();
        a.wall_time_secs = 0.0;
        b.wall_time_secs = 0.0;
        assert_eq!(a, b);
    }

    #[test]
    fn flat_landscape_returns_offset() {
        // Every one-hot vector of this instance has energy 2.
        let q = QuboInstance::from_terms(VarIndex::new(2, 2), [], [], 2.0).unwrap();
        let cfg = AnnealConfig::for_instance(&q, 10, 2, 0);
        let r = solve_anneal(&q, &cfg).unwrap();
        assert_eq!(r.energy, 2.0);
    }

    #[test]
    fn schedules_hit_both_ends() {
        let mut cfg = AnnealConfig::for_instance(&path4(), 10, 1, 0);
        cfg.t_initial = 8.0;
        cfg.t_final = 0.5;
        assert_eq!(cfg.temperature(0), 8.0);
        assert!((cfg.temperature(9) - 0.5).abs() < 1e-12);
        cfg.schedule = Schedule::Linear;
        assert!((cfg.temperature(9) - 0.5).abs() < 1e-12);
        assert!(cfg.temperature(3) > cfg.temperature(4));
    }

    #[test]
    fn rejects_bad_config() {
        let q = path4();
        let mut cfg = AnnealConfig::for_instance(&q, 10, 1, 0);
        cfg.t_final = cfg.t_initial * 2.0;
        assert!(solve_anneal(&q, &cfg).is_err());
        let mut cfg = AnnealConfig::for_instance(&q, 10, 1, 0);
        cfg.restarts = 0;
        assert!(solve_anneal(&q, &cfg).is_err());
    }
}
