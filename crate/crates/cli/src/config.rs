//! TOML run configuration.
//!
//! Values are resolved as built-in defaults, then the config file, then
//! command-line flags. Unknown keys are reported on stderr, or rejected
//! under `--strict`. Keys inside solver, penalty, distance and size tables
//! are always checked.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dhn_fairness::demand::ConsumerSizes;
use dhn_fairness::graph::DistanceRule;
use dhn_fairness::qubo::ClusterTerm;
use dhn_fairness::workflow::{PenaltySetting, SolverSpec};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Gnuplot,
}

#[derive(Debug, Default, Deserialize)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub generate: GenerateSection,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Default, Deserialize)]
pub struct GenerateSection {
    pub nodes: Option<usize>,
    pub chords: Option<usize>,
    pub branching: Option<usize>,
    pub distance: Option<DistanceRule>,
    pub timesteps: Option<usize>,
    pub sizes: Option<ConsumerSizes>,
}

#[derive(Debug, Default, Deserialize)]
pub struct ModelSection {
    pub cluster_term: Option<ClusterTerm>,
    pub penalty: Option<PenaltySetting>,
}

#[derive(Debug, Default, Deserialize)]
pub struct SolveSection {
    pub k: Option<usize>,
    pub solver: Option<SolverSpec>,
    pub kpi_alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
pub struct SweepSection {
    pub max_producers: Option<usize>,
    pub solvers: Option<Vec<SolverSpec>>,
    pub kpi_alpha: Option<f64>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path, strict: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("{}: cannot read config", path.display()))?;
        Self::parse(&text, path, strict)
    }

    pub fn parse(text: &str, path: &Path, strict: bool) -> Result<Self> {
        let mut unknown = Vec::new();
        let de = toml::Deserializer::parse(text)
            .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), one_line(&e.to_string())))?;
        let cfg: RunConfig = serde_ignored::deserialize(de, |key| unknown.push(key.to_string()))
            .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), one_line(&e.to_string())))?;
        if !unknown.is_empty() {
            let keys = unknown.iter().map(|k| format!("`{k}`")).collect::<Vec<_>>().join(", ");
            if strict {
                bail!("{}: unknown config keys {keys}", path.display());
            }
            eprintln!("warning: {}: ignoring unknown config keys {keys}", path.display());
        }
        Ok(cfg)
    }
}

/// Collapse a possibly multi-line message onto one line.
pub fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, strict: bool) -> Result<RunConfig> {
        RunConfig::parse(text, Path::new("run.toml"), strict)
    }

    #[test]
    fn full_config_parses() {
        let cfg = parse(
            r#"
seed = 7
threads = 2
[generate]
nodes = 24
distance = { kind = "uniform", min = 0.5, max = 2.0 }
sizes = { kind = "pareto", shape = 1.2 }
[model]
cluster_term = "weighted_laplacian"
penalty = { beta = 1.0, alpha = 2.0, gamma = 3.0 }
[solve]
k = 3
solver = { solver = "anneal", sweeps = 100 }
[sweep]
max_producers = 4
solvers = [{ solver = "heuristic" }, { solver = "exhaustive", cap = 32 }]
format = "csv"
"#,
            true,
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.model.cluster_term, Some(ClusterTerm::WeightedLaplacian));
        assert_eq!(cfg.sweep.solvers.unwrap().len(), 2);
        assert_eq!(cfg.sweep.format, Some(Format::Csv));
        assert!(matches!(cfg.model.penalty, Some(PenaltySetting::Fixed(_))));
    }

    #[test]
    fn auto_penalty() {
        let cfg = parse("[model]\npenalty = \"auto\"\n", true).unwrap();
        assert!(matches!(cfg.model.penalty, Some(PenaltySetting::Auto(_))));
    }

    #[test]
    fn unknown_keys_only_fail_when_strict() {
        assert!(parse("sed = 1\n[sweep]\nmax_producer = 3\n", false).is_ok());
        let err = parse("sed = 1\n[sweep]\nmax_producer = 3\n", true).unwrap_err().to_string();
        assert!(err.contains("`sed`") && err.contains("`sweep.max_producer`"), "{err}");
    }

    #[test]
    fn nested_tables_are_always_checked() {
        assert!(parse("[solve]\nsolver = { solver = \"anneal\", sweep = 3 }\n", false).is_err());
    }

    #[test]
    fn syntax_errors_are_single_line() {
        let err = parse("seed = = 3", false).unwrap_err().to_string();
        assert!(err.starts_with("run.toml: ") && !err.contains('\n'), "{err}");
    }
}
