//! The producer-count sweep: for every `k` in `1..=max_producers` and every
//! configured solver, build the QUBO, solve it and score the assignment.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::demand::{compute_weights, demands_to_csv, DemandMatrix, WeightVector};
use crate::error::{Error, Result};
use crate::fairness::{KpiReport, DEFAULT_KPI_ALPHA};
use crate::graph::{topology_to_string, ShortestPaths, Topology};
use crate::qubo::{build_qubo_with, default_penalties, ClusterTerm, PenaltyConfig};
use crate::solvers::{
    solve_anneal, solve_exhaustive_with_cap, solve_heuristic, AnnealConfig, HeuristicConfig, Schedule,
    SolveResult, DEFAULT_EXHAUSTIVE_CAP,
};
use crate::util::{mix_seed, sha256_hex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "solver", deny_unknown_fields)]
pub enum SolverSpec {
    Exhaustive {
        #[serde(default = "default_cap")]
        cap: usize,
    },
    Anneal {
        #[serde(default = "default_sweeps")]
        sweeps: usize,
        #[serde(default = "default_restarts")]
        restarts: usize,
        /// Derived from the instance when absent.
        #[serde(default)]
        t_initial: Option<f64>,
        #[serde(default)]
        t_final: Option<f64>,
        #[serde(default = "default_schedule")]
        schedule: Schedule,
    },
    Heuristic {
        #[serde(default = "default_starts")]
        starts: usize,
    },
}

fn default_cap() -> usize {
    DEFAULT_EXHAUSTIVE_CAP
}
fn default_sweeps() -> usize {
    2000
}
fn default_restarts() -> usize {
    8
}
fn default_schedule() -> Schedule {
    Schedule::Geometric
}
fn default_starts() -> usize {
    HeuristicConfig::default().starts
}

impl SolverSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SolverSpec::Exhaustive { .. } => "exhaustive",
            SolverSpec::Anneal { .. } => "anneal",
            SolverSpec::Heuristic { .. } => "heuristic",
        }
    }

    pub fn exhaustive() -> Self {
        SolverSpec::Exhaustive { cap: default_cap() }
    }

    pub fn anneal() -> Self {
        SolverSpec::Anneal {
            sweeps: default_sweeps(),
            restarts: default_restarts(),
            t_initial: None,
            t_final: None,
            schedule: default_schedule(),
        }
    }

    pub fn heuristic() -> Self {
        SolverSpec::Heuristic { starts: default_starts() }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "exhaustive" => Ok(Self::exhaustive()),
            "anneal" => Ok(Self::anneal()),
            "heuristic" => Ok(Self::heuristic()),
            other => Err(Error::InvalidParameter(format!(
                "unknown solver `{other}` (valid: exhaustive, anneal, heuristic)"
            ))),
        }
    }

    /// Solve one `(topology, weights, k)` cell.
    pub fn solve(
        &self,
        topo: &Topology,
        w: &[f64],
        k: usize,
        penalties: &PenaltyConfig,
        term: ClusterTerm,
        seed: u64,
    ) -> Result<SolveResult> {
        match *self {
            SolverSpec::Exhaustive { cap } => {
                solve_exhaustive_with_cap(&build_qubo_with(topo, w, k, penalties, term)?, cap)
            }
            SolverSpec::Anneal {
                sweeps,
                restarts,
                t_initial,
                t_final,
                schedule,
            } => {
                let q = build_qubo_with(topo, w, k, penalties, term)?;
                let mut cfg = AnnealConfig::for_instance(&q, sweeps, restarts, seed);
                cfg.schedule = schedule;
                if let Some(t) = t_initial {
                    cfg.t_initial = t;
                }
                if let Some(t) = t_final {
                    cfg.t_final = t;
                }
                solve_anneal(&q, &cfg)
            }
            SolverSpec::Heuristic { starts } => {
                solve_heuristic(topo, w, k, penalties, term, &HeuristicConfig { starts, seed })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", untagged)]
pub enum PenaltySetting {
    /// `"auto"`: [`default_penalties`] for every `k`.
    Auto(AutoTag),
    Fixed(PenaltyConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

impl Default for PenaltySetting {
    fn default() -> Self {
        PenaltySetting::Auto(AutoTag::Auto)
    }
}

impl PenaltySetting {
    pub fn resolve(&self, topo: &Topology, w: &[f64], k: usize) -> PenaltyConfig {
        match self {
            PenaltySetting::Auto(_) => default_penalties(topo, w, k),
            PenaltySetting::Fixed(cfg) => cfg.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub max_producers: usize,
    pub solvers: Vec<SolverSpec>,
    #[serde(default)]
    pub penalty: PenaltySetting,
    #[serde(default)]
    pub cluster_term: ClusterTerm,
    #[serde(default = "default_kpi_alpha")]
    pub kpi_alpha: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_kpi_alpha() -> f64 {
    DEFAULT_KPI_ALPHA
}

impl SweepConfig {
    pub fn new(max_producers: usize, solvers: Vec<SolverSpec>) -> Self {
        SweepConfig {
            max_producers,
            solvers,
            penalty: PenaltySetting::default(),
            cluster_term: ClusterTerm::default(),
            kpi_alpha: DEFAULT_KPI_ALPHA,
            seed: 0,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.max_producers == 0 || self.max_producers > n {
            return Err(Error::InvalidParameter(format!(
                "max_producers = {} must lie in 1..={n}",
                self.max_producers
            )));
        }
        if self.solvers.is_empty() {
            return Err(Error::InvalidParameter("no solvers selected".into()));
        }
        let mut names: Vec<&str> = self.solvers.iter().map(SolverSpec::name).collect();
        names.sort_unstable();
        if names.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidParameter("each solver may appear only once per sweep".into()));
        }
        if !(0.0..=1.0).contains(&self.kpi_alpha) {
            return Err(Error::InvalidParameter(format!("kpi_alpha = {} outside [0, 1]", self.kpi_alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellAssignment {
    pub k: usize,
    pub solver: String,
    pub producer_of: Vec<usize>,
}

/// A `(k, solver)` cell that produced no report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepWarning {
    pub k: usize,
    pub solver: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub topology_sha256: String,
    pub demand_sha256: String,
    pub config: SweepConfig,
    pub timestamp: Option<String>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub reports: Vec<KpiReport>,
    pub assignments: Vec<CellAssignment>,
    pub warnings: Vec<SweepWarning>,
    pub provenance: Provenance,
}

pub fn run_sweep(topo: &Topology, demands: &DemandMatrix, cfg: &SweepConfig) -> Result<SweepResult> {
    let aligned = demands.align_to(topo)?;
    let w = compute_weights(&aligned)?;
    sweep_weights(topo, &w, cfg, sha256_hex(demands_to_csv(&aligned).as_bytes()))
}

/// Sweep with precomputed weights. `demand_sha256` is recorded as given.
pub fn sweep_weights(topo: &Topology, w: &WeightVector, cfg: &SweepConfig, demand_sha256: String) -> Result<SweepResult> {
    let n = topo.node_count();
    if w.len() != n {
        return Err(Error::DimensionMismatch(format!("{} weights for {n} nodes", w.len())));
    }
    cfg.validate(n)?;
    let paths = ShortestPaths::new(topo);
    paths.require_connected()?;
    let w = w.as_slice();

    let cells: Vec<(usize, usize)> = (1..=cfg.max_producers)
        .flat_map(|k| (0..cfg.solvers.len()).map(move |s| (k, s)))
        .collect();
    type Cell = Result<(KpiReport, Vec<usize>)>;
    let outcomes: Vec<(usize, &SolverSpec, Cell)> = cells
        .par_iter()
        .map(|&(k, s)| {
            let spec = &cfg.solvers[s];
            let seed = mix_seed(mix_seed(cfg.seed, k as u64), s as u64);
            let outcome = (|| {
                let penalties = cfg.penalty.resolve(topo, w, k);
                let r = spec.solve(topo, w, k, &penalties, cfg.cluster_term, seed)?;
                let report = KpiReport::evaluate(&r.assignment, w, &paths, cfg.kpi_alpha, spec.name(), r.energy)?;
                Ok((report, r.assignment.producer_of().to_vec()))
            })();
            (k, spec, outcome)
        })
        .collect();

    let mut reports = Vec::new();
    let mut assignments = Vec::new();
    let mut warnings = Vec::new();
    for (k, spec, outcome) in outcomes {
        match outcome {
            Ok((report, producer_of)) => {
                reports.push(report);
                assignments.push(CellAssignment {
                    k,
                    solver: spec.name().into(),
                    producer_of,
                });
            }
            Err(e) => warnings.push(SweepWarning {
                k,
                solver: spec.name().into(),
                message: e.to_string(),
            }),
        }
    }
    reports.sort_by(|a, b| (a.k, &a.solver).cmp(&(b.k, &b.solver)));
    assignments.sort_by(|a, b| (a.k, &a.solver).cmp(&(b.k, &b.solver)));
    warnings.sort_by(|a, b| (a.k, &a.solver).cmp(&(b.k, &b.solver)));

    Ok(SweepResult {
        reports,
        assignments,
        warnings,
        provenance: Provenance {
            topology_sha256: sha256_hex(topology_to_string(topo).as_bytes()),
            demand_sha256,
            config: cfg.clone(),
            timestamp: None,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        },
    })
}

fn fmt_reports_csv<'a>(out: &mut String, rows: impl Iterator<Item = (Option<&'a str>, &'a KpiReport)>) {
    for (label, r) in rows {
        if let Some(label) = label {
            let _ = write!(out, "{label},");
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.k, r.solver, r.jain, r.distance_index, r.kpi, r.energy
        );
    }
}

impl SweepResult {
    /// Reports of one solver, ordered by `k`.
    pub fn series(&self, solver: &str) -> Vec<&KpiReport> {
        self.reports.iter().filter(|r| r.solver == solver).collect()
    }

    pub fn solver_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.reports.iter().map(|r| r.solver.clone()).collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,solver,jain,distance_index,kpi,energy\n");
        fmt_reports_csv(&mut out, self.reports.iter().map(|r| (None, r)));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sweep result serializes");
        s.push('\n');
        s
    }

    /// `(file stem, contents)` for the jain, distance and kpi panels. Each
    /// file holds one `k value` block per solver, blocks separated by two
    /// blank lines so gnuplot can address them with `index`.
    pub fn to_gnuplot(&self) -> Vec<(&'static str, String)> {
        type Panel = (&'static str, fn(&KpiReport) -> f64);
        let panels: [Panel; 3] = [
            ("jain", |r| r.jain),
            ("distance", |r| r.distance_index),
            ("kpi", |r| r.kpi),
        ];
        panels
            .iter()
            .map(|(stem, value)| {
                let mut out = String::new();
                for (b, solver) in self.solver_names().iter().enumerate() {
                    if b > 0 {
                        out.push_str("\n\n");
                    }
                    let _ = writeln!(out, "# {solver}: k {stem}");
                    for r in self.series(solver) {
                        let _ = writeln!(out, "{} {}", r.k, value(r));
                    }
                }
                (*stem, out)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub topology: String,
    pub solver: String,
    pub k: usize,
    pub jain: f64,
    pub distance_index: f64,
    pub kpi: f64,
}

/// Long-format table over several labeled sweeps. All sweeps must share
/// `max_producers` and `kpi_alpha`.
pub fn compare_topologies(sweeps: &[(String, SweepResult)]) -> Result<Vec<ComparisonRow>> {
    let Some((_, first)) = sweeps.first() else {
        return Err(Error::InvalidParameter("nothing to compare".into()));
    };
    let reference = &first.provenance.config;
    for (label, s) in sweeps {
        let cfg = &s.provenance.config;
        if cfg.max_producers != reference.max_producers || cfg.kpi_alpha != reference.kpi_alpha {
            return Err(Error::InvalidParameter(format!(
                "sweep `{label}` uses max_producers = {} and kpi_alpha = {}, expected {} and {}",
                cfg.max_producers, cfg.kpi_alpha, reference.max_producers, reference.kpi_alpha
            )));
        }
    }
    Ok(sweeps
        .iter()
        .flat_map(|(label, s)| {
            s.reports.iter().map(move |r| ComparisonRow {
                topology: label.clone(),
                solver: r.solver.clone(),
                k: r.k,
                jain: r.jain,
                distance_index: r.distance_index,
                kpi: r.kpi,
            })
        })
        .collect())
}

pub fn comparison_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("topology,solver,k,jain,distance_index,kpi\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.topology, r.solver, r.k, r.jain, r.distance_index, r.kpi
        );
    }
    out
}
