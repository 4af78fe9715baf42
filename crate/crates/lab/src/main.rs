use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cliquelab::bench::{graph_creation, GraphRecipe};
use cliquelab::decompose::{decompose_is, DecomposeConfig, DEFAULT_MAX_TRIPLE_DEPTH};
use cliquelab::dimacs::{parse_dimacs, to_dimacs_string};
use cliquelab::harness::{
    render_matrices, render_stats_csv, report_render, run_experiment, statistical_battery, ExperimentKind,
    ExperimentPlan, StepResult,
};
use cliquelab::solvers::{
    exact_max_clique, solve_max_clique, AnnealConfig, AnnealerClient, LocalAnnealer, OutcomeLine,
    EMBEDDING_LIMIT, EXACT_ORACLE_LIMIT,
};
use cliquelab::{greedy_chromatic_upper_bound, Graph};

/// Maximum clique laboratory: benchmark generation, decomposition,
/// annealing-based solving and statistical experiments.
#[derive(Debug, Parser)]
#[command(name = "lab", version)]
struct Cli {
    /// Directory for output files (the LAB_OUT environment variable takes precedence)
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a planted-clique benchmark graph (DIMACS + JSON sidecar)
    Generate(GenerateArgs),
    /// Shrink a graph with the independent-set decomposition
    Decompose(DecomposeArgs),
    /// Sample the maximum-clique QUBO of a graph
    Solve(SolveArgs),
    /// Run the statistical battery on a CSV of (group_label, value) rows
    Stats(StatsArgs),
    /// Run an experiment plan and write its report
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    n_node: usize,
    #[arg(long, default_value_t = 0)]
    ex_node: usize,
    #[arg(long, default_value_t = 1)]
    n_cli: usize,
    /// Also link clique pairs
    #[arg(long)]
    add_edges: bool,
    /// Draw each clique size uniformly from 2..=n_node
    #[arg(long)]
    rand_cli: bool,
    #[arg(long, default_value_t = 0.3)]
    intra_pct: f64,
    #[arg(long, default_value_t = 0.3)]
    inter_pct: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Base name of the output files
    #[arg(long, default_value = "graph")]
    name: String,
    /// Largest allowed graph
    #[arg(long, default_value_t = EMBEDDING_LIMIT)]
    max_nodes: usize,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    /// DIMACS input graph
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    final_dim: usize,
    /// Smallest clique size the guard must keep reachable
    #[arg(long)]
    min_cn: usize,
    /// Treat the input as the clique graph and decompose its complement
    #[arg(long)]
    complement: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIPLE_DEPTH)]
    depth: usize,
    /// Break degree ties by label instead of randomly
    #[arg(long)]
    deterministic_ties: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "decomposed")]
    name: String,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// DIMACS input graph
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    reads: usize,
    #[arg(long, default_value_t = 2000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0.05)]
    beta_initial: f64,
    #[arg(long, default_value_t = 12.0)]
    beta_final: f64,
    /// Sampler capacity in variables (at most 164)
    #[arg(long, default_value_t = EMBEDDING_LIMIT)]
    max_nodes: usize,
    #[arg(long, default_value = "outcomes")]
    name: String,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// CSV with `group_label,value` rows; a header row is optional
    #[arg(long)]
    input: PathBuf,
    /// Significance level (repeatable)
    #[arg(long = "alpha", default_values_t = [0.05, 0.1, 0.2])]
    alphas: Vec<f64>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Plan file (TOML)
    #[arg(long, conflicts_with = "kind")]
    plan: Option<PathBuf>,
    /// Built-in desk-scale plan: ratio_sweep, density_sweep, indices_study, clique_count, size_study
    #[arg(long)]
    kind: Option<ExperimentKind>,
    /// Master seed (overrides the plan's)
    #[arg(long)]
    seed: Option<u64>,
    /// Significance level (repeatable, overrides the plan's)
    #[arg(long = "alpha")]
    alphas: Vec<f64>,
    #[arg(long)]
    reads: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Write the effective plan here and exit without running it
    #[arg(long)]
    write_plan: Option<PathBuf>,
}

fn out_dir(cli_value: &Path) -> Result<PathBuf> {
    let dir = match std::env::var_os("LAB_OUT") {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => cli_value.to_path_buf(),
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))?;
    if parsed.duplicates_merged > 0 {
        log::warn!(
            "{}: merged {} duplicate edge(s)",
            path.display(),
            parsed.duplicates_merged
        );
    }
    Ok(parsed.graph)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn generate(args: GenerateArgs, dir: &Path) -> Result<()> {
    let recipe = GraphRecipe {
        n_node: args.n_node,
        ex_node: args.ex_node,
        n_cli: args.n_cli,
        add_edges: args.add_edges,
        rand_cli: args.rand_cli,
        intra_edge_pct: args.intra_pct,
        inter_edge_pct: args.inter_pct,
        rng_seed: args.seed,
    };
    if recipe.final_dim() > args.max_nodes.min(EMBEDDING_LIMIT) {
        bail!(
            "recipe has {} nodes, above the {}-node limit",
            recipe.final_dim(),
            args.max_nodes.min(EMBEDDING_LIMIT)
        );
    }
    let bench = graph_creation(&recipe)?;
    let dimacs = dir.join(format!("{}.dimacs", args.name));
    write_file(&dimacs, &to_dimacs_string(&bench.graph))?;
    let sidecar = json!({
        "recipe": bench.recipe,
        "clique_lists": bench.clique_lists,
        "planted_max_size": bench.planted_max_size,
        "density": bench.graph.density().ok(),
        "greedy_bound": greedy_chromatic_upper_bound(&bench.graph),
        "baseline_bound": bench.baseline_bound,
        "isolated_external": bench.isolated_external,
        "attempted_edges": bench.attempted_edges,
        "accepted_edges": bench.accepted_edges,
    });
    let json_path = dir.join(format!("{}.json", args.name));
    write_file(&json_path, &to_json(&sidecar))?;
    println!("{}", dimacs.display());
    println!("{}", json_path.display());
    Ok(())
}

fn decompose(args: DecomposeArgs, dir: &Path) -> Result<()> {
    let mut g = read_graph(&args.input)?;
    if args.complement {
        g = g.complement();
    }
    let cfg = DecomposeConfig {
        max_triple_depth: args.depth,
        rng_seed: args.seed,
        deterministic_ties: args.deterministic_ties,
        ..DecomposeConfig::new(args.final_dim, args.min_cn)
    };
    let (out, trace) = decompose_is(&g, &cfg)?;
    let dimacs = dir.join(format!("{}.dimacs", args.name));
    write_file(&dimacs, &to_dimacs_string(&out))?;
    let trace_path = dir.join(format!("{}.trace.json", args.name));
    write_file(&trace_path, &to_json(&json!({ "config": cfg, "trace": trace })))?;
    println!("{}", dimacs.display());
    println!("{}", trace_path.display());
    Ok(())
}

fn solve(args: SolveArgs, dir: &Path) -> Result<()> {
    let g = read_graph(&args.input)?;
    let cfg = AnnealConfig {
        num_reads: args.reads,
        sweeps_per_read: args.sweeps,
        beta_initial: args.beta_initial,
        beta_final: args.beta_final,
        rng_seed: args.seed,
    };
    let client = LocalAnnealer::with_max_variables(args.max_nodes);
    let model = cliquelab::qubo::build_mc_qubo(&g, 1.0, 2.0)?;
    let outcomes = client.sample(&model, &cfg)?;
    let path = dir.join(format!("{}.jsonl", args.name));
    let mut lines = String::new();
    for o in &outcomes {
        lines.push_str(&serde_json::to_string(&OutcomeLine::from(o))?);
        lines.push('\n');
    }
    write_file(&path, &lines)?;
    let best = solve_max_clique(&g, &client, &cfg)?;
    let mut summary = json!({
        "best_clique": best.repaired_set,
        "size": best.repaired_set.len(),
        "energy": best.energy,
        "read": best.read_index,
    });
    if g.vertex_count() <= EXACT_ORACLE_LIMIT {
        summary["exact_clique_number"] = json!(exact_max_clique(&g)?.len());
    }
    println!("{}", serde_json::to_string(&summary)?);
    println!("{}", path.display());
    Ok(())
}

fn read_samples(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.with_context(|| format!("{}: line {}", path.display(), i + 1))?;
        if row.len() != 2 {
            bail!(
                "{}: line {}: expected 2 fields, got {}",
                path.display(),
                i + 1,
                row.len()
            );
        }
        let value: f64 = match row[1].parse() {
            Ok(v) => v,
            Err(_) if i == 0 => continue, // header
            Err(e) => bail!("{}: line {}: {e}", path.display(), i + 1),
        };
        match groups.iter_mut().find(|(l, _)| l == &row[0]) {
            Some((_, values)) => values.push(value),
            None => groups.push((row[0].to_string(), vec![value])),
        }
    }
    Ok(groups)
}

fn stats(args: StatsArgs, dir: &Path) -> Result<()> {
    let samples = read_samples(&args.input)?;
    let report = statistical_battery(&samples, &args.alphas);
    let csv_path = dir.join("stats.csv");
    write_file(&csv_path, &render_stats_csv(&report))?;
    let matrices = render_matrices(&report);
    write_file(&dir.join("matrices.txt"), &matrices)?;

    let mut out = std::io::stdout().lock();
    let first = args.alphas.first().copied().unwrap_or(0.05);
    for row in report.rows.iter().filter(|r| r.alpha == first) {
        let who = row
            .group
            .as_deref()
            .map(|g| format!(" [{g}]"))
            .unwrap_or_default();
        match &row.result {
            StepResult::Outcome(o) => writeln!(
                out,
                "{}{who}: statistic={} p={} reject={}",
                row.method.name(),
                o.statistic,
                o.p_value.map(|p| p.to_string()).unwrap_or_default(),
                o.reject_null
            )?,
            StepResult::Note(n) => writeln!(out, "{}{who}: {n}", row.method.name())?,
        }
    }
    writeln!(out)?;
    write!(out, "{matrices}")?;
    Ok(())
}

fn experiment(args: ExperimentArgs, dir: &Path) -> Result<()> {
    let mut plan = match (&args.plan, args.kind) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentPlan::from_toml(&text).with_context(|| format!("loading {}", path.display()))?
        }
        (None, Some(kind)) => ExperimentPlan::desk(kind, 0),
        (None, None) => bail!("pass --plan <file> or --kind <kind>"),
    };
    if let Some(seed) = args.seed {
        plan.master_seed = seed;
    }
    if !args.alphas.is_empty() {
        plan.alphas = args.alphas.clone();
    }
    if let Some(r) = args.reads {
        plan.anneal.num_reads = r;
    }
    if let Some(s) = args.sweeps {
        plan.anneal.sweeps_per_read = s;
    }
    if let Some(m) = args.max_nodes {
        plan.max_nodes = m;
    }
    plan.validate()?;
    if let Some(path) = &args.write_plan {
        write_file(path, &plan.to_toml())?;
        println!("{}", path.display());
        return Ok(());
    }
    let report = run_experiment(&plan)?;
    for path in report_render(&report, dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let dir = out_dir(&cli.out_dir)?;
    match cli.command {
        Command::Generate(a) => generate(a, &dir),
        Command::Decompose(a) => decompose(a, &dir),
        Command::Solve(a) => solve(a, &dir),
        Command::Stats(a) => stats(a, &dir),
        Command::Experiment(a) => experiment(a, &dir),
    }
}
