//! `dhnfair`: generate district heating topologies, turn demand profiles into
//! weights, build and solve the producer-assignment QUBO and sweep fairness
//! KPIs over the number of producers.

mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dhn_fairness::demand::{
    align_weights, compute_weights, load_demands, load_weights, save_demands, synthetic_profiles,
    weights_to_csv, ConsumerSizes, WeightVector,
};
use dhn_fairness::fairness::{KpiReport, DEFAULT_KPI_ALPHA};
use dhn_fairness::graph::{load_topology, ring, topology_to_string, tree, DistanceRule, ShortestPaths, Topology};
use dhn_fairness::qubo::{
    build_qubo_with, build_unweighted_qubo, qubo_to_string, var_map_path, var_map_to_string, ClusterTerm,
    PenaltyConfig,
};
use dhn_fairness::solvers::SolveResult;
use dhn_fairness::util::{sha256_hex, write_atomic};
use dhn_fairness::workflow::{
    compare_topologies, comparison_to_csv, sweep_weights, PenaltySetting, SolverSpec, SweepConfig, SweepResult,
};
use serde::Serialize;

use config::{one_line, Format, RunConfig};

/// Environment variable naming the directory for outputs written without `-o`.
const OUT_DIR_VAR: &str = "DHNFAIR_OUT_DIR";
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "dhnfair", version, about = "Producer fairness of district heating network topologies")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Reject unknown keys in the config file and unknown fields in input files.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for every random choice [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections [default: all cores].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic topology or demand profile.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Peak-demand weights from a demand CSV.
    Weights(WeightsArgs),
    /// Export the QUBO of one producer count.
    Qubo(QuboArgs),
    /// Solve one producer count and report its KPIs.
    Solve(SolveArgs),
    /// KPIs for every producer count from 1 to N.
    Sweep(SweepArgs),
    /// Long-format table over several sweep results.
    Compare(CompareArgs),
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Cycle through all nodes plus random chords.
    Ring(RingArgs),
    /// Tree where node i hangs off node (i - 1) / branching.
    Tree(TreeArgs),
    /// Seeded demand profiles, one column per node.
    Demands(DemandArgs),
}

#[derive(Args)]
struct DistanceArgs {
    /// Same length for every pipe [default: 1].
    #[arg(long, conflicts_with_all = ["min_distance", "max_distance"])]
    distance: Option<f64>,
    /// Lower bound of uniformly drawn pipe lengths.
    #[arg(long, requires = "max_distance")]
    min_distance: Option<f64>,
    /// Upper bound of uniformly drawn pipe lengths.
    #[arg(long, requires = "min_distance")]
    max_distance: Option<f64>,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    nodes: Option<u64>,
    /// Extra edges between non-adjacent ring nodes [default: 0].
    #[arg(long)]
    chords: Option<usize>,
    #[command(flatten)]
    distance: DistanceArgs,
    /// Output file [default: ring.json].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    nodes: Option<u64>,
    /// Children per node [default: 2].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    branching: Option<u64>,
    #[command(flatten)]
    distance: DistanceArgs,
    /// Output file [default: tree.json].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DemandArgs {
    /// Take node labels from this topology.
    #[arg(long, conflicts_with = "nodes")]
    topology: Option<PathBuf>,
    /// Number of nodes, labelled 0..n.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    nodes: Option<u64>,
    /// Rows in the profile [default: 8760].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    timesteps: Option<u64>,
    /// Pareto tail index of consumer sizes [default: 1.2].
    #[arg(long, conflicts_with = "spread")]
    pareto_shape: Option<f64>,
    /// Log-uniform consumer sizes within this factor of each other.
    #[arg(long)]
    spread: Option<f64>,
    /// Output file [default: demands.csv].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WeightsArgs {
    /// Demand CSV: one column per node, one row per timestep.
    demands: PathBuf,
    /// Order the weights like this topology's nodes.
    #[arg(long)]
    topology: Option<PathBuf>,
    /// Output file [default: weights.csv].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    topology: PathBuf,
    /// Weights CSV as written by `weights`.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Cluster term of the cost function [default: distance-laplacian].
    #[arg(long, value_enum)]
    cluster_term: Option<ClusterTermArg>,
    /// Fixed penalties; all three are needed, otherwise they are derived
    /// from the instance.
    #[arg(long, requires_all = ["alpha", "gamma"])]
    beta: Option<f64>,
    #[arg(long, requires_all = ["beta", "gamma"])]
    alpha: Option<f64>,
    #[arg(long, requires_all = ["beta", "alpha"])]
    gamma: Option<f64>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ClusterTermArg {
    DistanceLaplacian,
    WeightedLaplacian,
}

impl From<ClusterTermArg> for ClusterTerm {
    fn from(arg: ClusterTermArg) -> Self {
        match arg {
            ClusterTermArg::DistanceLaplacian => ClusterTerm::DistanceLaplacian,
            ClusterTermArg::WeightedLaplacian => ClusterTerm::WeightedLaplacian,
        }
    }
}

#[derive(Args)]
struct QuboArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of producers.
    #[arg(short)]
    k: Option<usize>,
    /// Equal-demand variant over the combinatorial Laplacian; ignores weights.
    #[arg(long, conflicts_with_all = ["weights", "cluster_term"])]
    unweighted: bool,
    /// Output file [default: instance.qubo]; the variable map goes next to it.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// exhaustive, anneal or heuristic [default: heuristic].
    #[arg(long)]
    solver: Option<String>,
    /// Annealing sweeps per restart.
    #[arg(long)]
    sweeps: Option<usize>,
    /// Independent annealing restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// Heuristic greedy starts.
    #[arg(long)]
    starts: Option<usize>,
    /// Largest n * k the exhaustive solver accepts.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(short)]
    k: Option<usize>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Weight of the Jain index in the KPI [default: 0.5].
    #[arg(long)]
    kpi_alpha: Option<f64>,
    /// Record wall-clock time; outputs then differ between runs.
    #[arg(long)]
    timings: bool,
    /// Output file [default: solution.json].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    topology: PathBuf,
    /// Demand CSV; weights are derived from it.
    #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
    demands: Option<PathBuf>,
    /// Precomputed weights CSV.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Largest producer count N [default: 8, capped at the node count].
    #[arg(long)]
    max_producers: Option<usize>,
    /// Solver to run; repeat for several [default: heuristic].
    #[arg(long = "solver")]
    solvers: Vec<String>,
    #[arg(long, value_enum)]
    cluster_term: Option<ClusterTermArg>,
    #[arg(long)]
    kpi_alpha: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Record the run time in the provenance block.
    #[arg(long)]
    timestamp: bool,
    /// Output file, or file prefix for gnuplot [default: sweep.<format>].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// `label=sweep.json` pairs.
    #[arg(required = true)]
    sweeps: Vec<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file [default: comparison.<format>].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Run {
    config: RunConfig,
    strict: bool,
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| one_line(&c.to_string())).collect();
            eprintln!("error: {}", chain.join(": "));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path, cli.strict)?,
        None => RunConfig::default(),
    };
    let threads = cli.threads.map(|t| t as usize).or(config.threads);
    if let Some(threads) = threads {
        if threads == 0 {
            bail!("threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot size the thread pool")?;
    }
    let ctx = Run {
        seed: cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
        config,
        strict: cli.strict,
    };
    match cli.command {
        Command::Generate(GenerateCommand::Ring(args)) => generate_ring(&ctx, args),
        Command::Generate(GenerateCommand::Tree(args)) => generate_tree(&ctx, args),
        Command::Generate(GenerateCommand::Demands(args)) => generate_demands(&ctx, args),
        Command::Weights(args) => weights(&ctx, args),
        Command::Qubo(args) => qubo(&ctx, args),
        Command::Solve(args) => solve(&ctx, args),
        Command::Sweep(args) => sweep(&ctx, args),
        Command::Compare(args) => compare(args),
    }
}

/// Where an output goes: `-` is stdout, a relative default name lands in
/// `$DHNFAIR_OUT_DIR` (or the working directory).
fn output_path(flag: Option<PathBuf>, default_name: &str) -> Result<Option<PathBuf>> {
    match flag {
        Some(p) if p.as_os_str() == "-" => Ok(None),
        Some(p) => Ok(Some(p)),
        None => {
            let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir).with_context(|| format!("{}: cannot create output directory", dir.display()))?;
            Ok(Some(dir.join(default_name)))
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(write_atomic(p, text.as_bytes())?),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).context("cannot write to stdout")?;
            Ok(())
        }
    }
}

fn distance_rule(args: &DistanceArgs, configured: Option<DistanceRule>) -> DistanceRule {
    match (args.distance, args.min_distance, args.max_distance) {
        (Some(distance), _, _) => DistanceRule::Constant { distance },
        (None, Some(min), Some(max)) => DistanceRule::Uniform { min, max },
        _ => configured.unwrap_or_else(DistanceRule::unit),
    }
}

fn node_count(flag: Option<u64>, configured: Option<usize>) -> Result<usize> {
    match flag.map(|n| n as usize).or(configured) {
        Some(0) => bail!("nodes must be at least 1"),
        Some(n) => Ok(n),
        None => bail!("node count missing: pass --nodes or set generate.nodes"),
    }
}

fn write_topology(topo: &Topology, output: Option<PathBuf>, default_name: &str) -> Result<()> {
    let path = output_path(output, default_name)?;
    emit(path.as_deref(), &topology_to_string(topo))
}

fn generate_ring(ctx: &Run, args: RingArgs) -> Result<()> {
    let g = &ctx.config.generate;
    let n = node_count(args.nodes, g.nodes)?;
    let chords = args.chords.or(g.chords).unwrap_or(0);
    let topo = ring(n, chords, distance_rule(&args.distance, g.distance), ctx.seed)?;
    write_topology(&topo, args.output, "ring.json")
}

fn generate_tree(ctx: &Run, args: TreeArgs) -> Result<()> {
    let g = &ctx.config.generate;
    let n = node_count(args.nodes, g.nodes)?;
    let branching = args.branching.map(|b| b as usize).or(g.branching).unwrap_or(2);
    let topo = tree(n, branching, distance_rule(&args.distance, g.distance), ctx.seed)?;
    write_topology(&topo, args.output, "tree.json")
}

fn generate_demands(ctx: &Run, args: DemandArgs) -> Result<()> {
    let g = &ctx.config.generate;
    let labels: Vec<String> = match &args.topology {
        Some(path) => {
            let topo = load_topology(path, ctx.strict)?;
            (0..topo.node_count()).map(|i| topo.label(i)).collect()
        }
        None => (0..node_count(args.nodes, g.nodes)?).map(|i| i.to_string()).collect(),
    };
    let sizes = match (args.pareto_shape, args.spread) {
        (Some(shape), _) => ConsumerSizes::Pareto { shape },
        (None, Some(spread)) => ConsumerSizes::LogUniform { spread },
        (None, None) => g.sizes.unwrap_or(ConsumerSizes::Pareto { shape: 1.2 }),
    };
    let timesteps = args.timesteps.map(|t| t as usize).or(g.timesteps).unwrap_or(8760);
    let demands = synthetic_profiles(labels, timesteps, sizes, ctx.seed)?;
    match output_path(args.output, "demands.csv")? {
        Some(path) => Ok(save_demands(&demands, &path)?),
        None => emit(None, &dhn_fairness::demand::demands_to_csv(&demands)),
    }
}

fn weights(ctx: &Run, args: WeightsArgs) -> Result<()> {
    let mut demands = load_demands(&args.demands)?;
    if let Some(path) = &args.topology {
        demands = demands.align_to(&load_topology(path, ctx.strict)?)?;
    }
    let w = compute_weights(&demands)?;
    let path = output_path(args.output, "weights.csv")?;
    emit(path.as_deref(), &weights_to_csv(demands.labels(), &w))
}

/// Topology and weights of a model, with weights ordered like the nodes.
/// Without a weights file every node weighs the same.
fn load_model(ctx: &Run, args: &ModelArgs) -> Result<(Topology, WeightVector, String)> {
    let topo = load_topology(&args.topology, ctx.strict)?;
    let (w, sha) = match &args.weights {
        Some(path) => {
            let (labels, w) = load_weights(path)?;
            let bytes = std::fs::read(path).with_context(|| format!("{}: cannot read", path.display()))?;
            (align_weights(&labels, &w, &topo)?, sha256_hex(&bytes))
        }
        None => (WeightVector::uniform(topo.node_count()), String::new()),
    };
    Ok((topo, w, sha))
}

fn cluster_term(ctx: &Run, flag: Option<ClusterTermArg>) -> ClusterTerm {
    flag.map(ClusterTerm::from).or(ctx.config.model.cluster_term).unwrap_or_default()
}

fn penalty_setting(ctx: &Run, args: &ModelArgs) -> PenaltySetting {
    match (args.beta, args.alpha, args.gamma) {
        (Some(beta), Some(alpha), Some(gamma)) => PenaltySetting::Fixed(PenaltyConfig::uniform(beta, alpha, gamma)),
        _ => ctx.config.model.penalty.clone().unwrap_or_default(),
    }
}

fn producer_count(flag: Option<usize>, configured: Option<usize>) -> Result<usize> {
    flag.or(configured)
        .ok_or_else(|| anyhow::anyhow!("producer count missing: pass -k or set solve.k"))
}

fn qubo(ctx: &Run, args: QuboArgs) -> Result<()> {
    let (topo, w, _) = load_model(ctx, &args.model)?;
    let k = producer_count(args.k, ctx.config.solve.k)?;
    let q = if args.unweighted {
        let n = topo.node_count();
        let penalties = penalty_setting(ctx, &args.model).resolve(&topo, &vec![1.0; n], k);
        build_unweighted_qubo(&topo, k, &penalties)?
    } else {
        let penalties = penalty_setting(ctx, &args.model).resolve(&topo, w.as_slice(), k);
        build_qubo_with(&topo, w.as_slice(), k, &penalties, cluster_term(ctx, args.model.cluster_term))?
    };
    match output_path(args.output, "instance.qubo")? {
        Some(path) => {
            // Variable map first: a QUBO file never appears without it.
            write_atomic(&var_map_path(&path), var_map_to_string(q.index()).as_bytes())?;
            write_atomic(&path, qubo_to_string(&q).as_bytes())?;
            Ok(())
        }
        None => emit(None, &qubo_to_string(&q)),
    }
}

/// Apply solver flags on top of a configured or named solver.
fn solver_spec(base: SolverSpec, args: &SolverArgs) -> Result<SolverSpec> {
    let mut spec = base;
    match &mut spec {
        SolverSpec::Exhaustive { cap } => {
            if let Some(c) = args.cap {
                *cap = c;
            }
        }
        SolverSpec::Anneal { sweeps, restarts, .. } => {
            if let Some(s) = args.sweeps {
                *sweeps = s;
            }
            if let Some(r) = args.restarts {
                *restarts = r;
            }
        }
        SolverSpec::Heuristic { starts } => {
            if let Some(s) = args.starts {
                *starts = s;
            }
        }
    }
    let unused: Vec<&str> = [
        ("--cap", args.cap.is_some() && !matches!(spec, SolverSpec::Exhaustive { .. })),
        ("--sweeps", args.sweeps.is_some() && !matches!(spec, SolverSpec::Anneal { .. })),
        ("--restarts", args.restarts.is_some() && !matches!(spec, SolverSpec::Anneal { .. })),
        ("--starts", args.starts.is_some() && !matches!(spec, SolverSpec::Heuristic { .. })),
    ]
    .into_iter()
    .filter(|(_, bad)| *bad)
    .map(|(flag, _)| flag)
    .collect();
    if !unused.is_empty() {
        bail!("{} not used by the {} solver", unused.join(", "), spec.name());
    }
    Ok(spec)
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    topology_sha256: String,
    weights_sha256: String,
    k: usize,
    cluster_term: ClusterTerm,
    penalties: &'a PenaltyConfig,
    result: SolveResult,
    report: KpiReport,
}

fn solve(ctx: &Run, args: SolveArgs) -> Result<()> {
    let (topo, w, weights_sha256) = load_model(ctx, &args.model)?;
    let cfg = &ctx.config.solve;
    let k = producer_count(args.k, cfg.k)?;
    let base = match &args.solver.solver {
        Some(name) => SolverSpec::by_name(name)?,
        None => cfg.solver.clone().unwrap_or_else(SolverSpec::heuristic),
    };
    let spec = solver_spec(base, &args.solver)?;
    let term = cluster_term(ctx, args.model.cluster_term);
    let penalties = penalty_setting(ctx, &args.model).resolve(&topo, w.as_slice(), k);
    let kpi_alpha = args.kpi_alpha.or(cfg.kpi_alpha).unwrap_or(DEFAULT_KPI_ALPHA);

    let mut result = spec.solve(&topo, w.as_slice(), k, &penalties, term, ctx.seed)?;
    if !args.timings {
        result.wall_time_secs = 0.0;
    }
    let paths = ShortestPaths::new(&topo);
    let report = KpiReport::evaluate(&result.assignment, w.as_slice(), &paths, kpi_alpha, spec.name(), result.energy)?;
    let out = SolveOutput {
        topology_sha256: sha256_hex(topology_to_string(&topo).as_bytes()),
        weights_sha256,
        k,
        cluster_term: term,
        penalties: &penalties,
        result,
        report,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    let path = output_path(args.output, "solution.json")?;
    emit(path.as_deref(), &text)
}

fn sweep(ctx: &Run, args: SweepArgs) -> Result<()> {
    let topo = load_topology(&args.topology, ctx.strict)?;
    let (w, demand_sha256) = match (&args.demands, &args.weights) {
        (Some(path), _) => {
            let demands = load_demands(path)?.align_to(&topo)?;
            let sha = sha256_hex(dhn_fairness::demand::demands_to_csv(&demands).as_bytes());
            (compute_weights(&demands)?, sha)
        }
        (None, Some(path)) => {
            let (labels, w) = load_weights(path)?;
            let bytes = std::fs::read(path).with_context(|| format!("{}: cannot read", path.display()))?;
            (align_weights(&labels, &w, &topo)?, sha256_hex(&bytes))
        }
        (None, None) => bail!("pass --demands or --weights"),
    };
    let section = &ctx.config.sweep;
    let solvers = if args.solvers.is_empty() {
        section.solvers.clone().unwrap_or_else(|| vec![SolverSpec::heuristic()])
    } else {
        args.solvers.iter().map(|name| SolverSpec::by_name(name)).collect::<Result<_, _>>()?
    };
    let max_producers = args
        .max_producers
        .or(section.max_producers)
        .unwrap_or_else(|| 8.min(topo.node_count()));
    let mut cfg = SweepConfig::new(max_producers, solvers);
    cfg.penalty = ctx.config.model.penalty.clone().unwrap_or_default();
    cfg.cluster_term = cluster_term(ctx, args.cluster_term);
    cfg.kpi_alpha = args.kpi_alpha.or(section.kpi_alpha).unwrap_or(DEFAULT_KPI_ALPHA);
    cfg.seed = ctx.seed;

    let mut result = sweep_weights(&topo, &w, &cfg, demand_sha256)?;
    for warning in &result.warnings {
        eprintln!("warning: k = {} {}: {}", warning.k, warning.solver, one_line(&warning.message));
    }
    if args.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        result.provenance.timestamp = Some(format!("unix:{secs}"));
    }
    write_sweep(&result, args.format.or(section.format).unwrap_or(Format::Json), args.output)
}

fn write_sweep(result: &SweepResult, format: Format, output: Option<PathBuf>) -> Result<()> {
    match format {
        Format::Json => {
            let path = output_path(output, "sweep.json")?;
            emit(path.as_deref(), &result.to_json())
        }
        Format::Csv => {
            let path = output_path(output, "sweep.csv")?;
            emit(path.as_deref(), &result.to_csv())
        }
        Format::Gnuplot => {
            let Some(prefix) = output_path(output, "sweep")? else {
                bail!("gnuplot output writes several files; pass a file prefix with -o");
            };
            for (stem, text) in result.to_gnuplot() {
                let mut name = prefix.clone().into_os_string();
                name.push(format!("-{stem}.dat"));
                write_atomic(Path::new(&name), text.as_bytes())?;
            }
            Ok(())
        }
    }
}

fn compare(args: CompareArgs) -> Result<()> {
    let mut sweeps = Vec::new();
    for item in &args.sweeps {
        let Some((label, path)) = item.split_once('=') else {
            bail!("`{item}` is not of the form label=path");
        };
        if label.is_empty() || label.contains(',') {
            bail!("label `{label}` must be non-empty and free of commas");
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("{path}: cannot read"))?;
        let result: SweepResult =
            serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{path}: not a sweep result: {e}"))?;
        sweeps.push((label.to_string(), result));
    }
    let rows = compare_topologies(&sweeps)?;
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let path = output_path(args.output, "comparison.csv")?;
            emit(path.as_deref(), &comparison_to_csv(&rows))
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&rows)?;
            text.push('\n');
            let path = output_path(args.output, "comparison.json")?;
            emit(path.as_deref(), &text)
        }
        Format::Gnuplot => bail!("compare writes csv or json"),
    }
}
