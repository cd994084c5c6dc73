//! `physarum` command line: graph generation, single solves, criterion
//! benchmark sweeps, and transition-point evaluation.
//!
//! Every command honors `--seed`; identical invocations reproduce identical
//! output apart from wall-time fields. Exit codes: 0 ok, 2 usage or
//! validation, 3 I/O, 4 not terminated / unconfirmed, 5 numerical failure.

use clap::{Args, Parser, Subcommand};
use physarum::engine::SolverConfig;
use physarum::harness::{SuiteSpec, TPointReport};
use physarum::report::{
    runtime_table_csv, success_table_csv, tpoint_report_csv, trace_jsonl, write_atomic,
};
use physarum::{
    emit_edge_list, gen_complete, gen_small_world, parse_edge_list, parse_tntp, run_success_suite,
    run_tpoint_eval, EngineError, Graph, GraphError, HarnessError, ReportError, TerminatedBy,
    TerminationCriterion, TntpOptions, WeightColumn,
};
use serde::Deserialize;
use std::path::{Path, PathBuf};

const EXIT_USAGE: i32 = 2;
const EXIT_IO: i32 = 3;
const EXIT_NOT_TERMINATED: i32 = 4;
const EXIT_NUMERICAL: i32 = 5;

const DEFAULT_BETA: f64 = 0.15;

#[derive(Parser)]
#[command(
    name = "physarum",
    version,
    about = "Physarum shortest-path solver and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge-list file
    Gen(GenArgs),
    /// Run the solver on one graph until the termination criterion fires
    Solve(SolveArgs),
    /// Criterion-comparison sweep over seeded random complete graphs
    Bench(BenchArgs),
    /// Transition-point evaluation of one graph
    Tpoint(TpointArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// Complete graph with uniform integer weights
    Complete(GenCompleteArgs),
    /// Watts-Strogatz small-world graph
    Sw(GenSwArgs),
}

#[derive(Args)]
struct GenCompleteArgs {
    /// Number of nodes
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    #[arg(long, default_value_t = 10_000)]
    wmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file
    #[arg(short, long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct GenSwArgs {
    /// Number of nodes
    #[arg(long)]
    n: usize,
    /// Mean node degree (even)
    #[arg(long)]
    degree: usize,
    /// Rewiring probability
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    #[arg(long, default_value_t = 10_000)]
    wmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file
    #[arg(short, long, value_name = "FILE")]
    out: PathBuf,
}

/// Exactly one graph source per invocation.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSourceArgs {
    /// Edge-list file
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// TNTP network file
    #[arg(long, value_name = "FILE")]
    tntp: Option<PathBuf>,
    /// Generate a complete graph with this many nodes
    #[arg(long, value_name = "N")]
    complete: Option<usize>,
    /// Generate a small-world graph: N,DEGREE[,BETA]
    #[arg(long, value_name = "N,DEG[,BETA]")]
    sw: Option<String>,
}

#[derive(Args)]
struct GraphTuningArgs {
    /// Seed for generated graph sources
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    #[arg(long, default_value_t = 10_000)]
    wmax: u64,
    /// Override the source node
    #[arg(long)]
    source: Option<usize>,
    /// Override the sink node
    #[arg(long)]
    sink: Option<usize>,
    /// TNTP weight column: capacity, length, fft, or a field index
    #[arg(long, value_name = "COL", default_value = "length")]
    weight_col: String,
}

#[derive(Args)]
struct EngineArgs {
    /// Inflow magnitude
    #[arg(long, default_value_t = 1.0)]
    in0: f64,
    /// Conductivity-update time step
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    /// Initial conductivity
    #[arg(long = "init-d", default_value_t = 0.5)]
    init_d: f64,
    /// Iteration budget
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// Pressure-solve residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl EngineArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            in0: self.in0,
            delta_t: self.dt,
            alpha: 1.0,
            initial_d: self.init_d,
            linear_tolerance: self.tol,
            max_iterations: self.budget,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: GraphSourceArgs,
    #[command(flatten)]
    tuning: GraphTuningArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Termination criterion: eps=<real> or k=<int>
    #[arg(long, value_name = "SPEC")]
    criterion: String,
    /// Write the per-iteration trace as JSON lines
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON file mirroring these flags (explicit flags win)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Graph sizes, comma separated
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Graphs per size
    #[arg(long)]
    count: Option<usize>,
    /// Criteria, comma separated (eps=<real> | k=<int>)
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<String>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    wmin: Option<u64>,
    #[arg(long)]
    wmax: Option<u64>,
    /// Worker threads (0 = all cores); results are identical for any value
    #[arg(long)]
    jobs: Option<usize>,
    /// Output prefix; writes <prefix>.success.csv and <prefix>.runtime.csv
    #[arg(short, long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

/// JSON mirror of the bench flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchConfigFile {
    sizes: Option<Vec<usize>>,
    count: Option<usize>,
    criteria: Option<Vec<String>>,
    seed: Option<u64>,
    budget: Option<usize>,
    wmin: Option<u64>,
    wmax: Option<u64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TpointArgs {
    #[command(flatten)]
    source: GraphSourceArgs,
    #[command(flatten)]
    tuning: GraphTuningArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Criterion whose firing point is recorded alongside the protocol
    #[arg(long, value_name = "SPEC", default_value = "k=10")]
    criterion: String,
    /// Confirmation window (iterations past the match)
    #[arg(long, default_value_t = physarum::DEFAULT_TPOINT_WINDOW)]
    window: usize,
    /// Protocol repeats
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Write per-repeat results as CSV
    #[arg(short, long, value_name = "FILE")]
    out: Option<PathBuf>,
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InvalidConfig(msg) => CliError::usage(msg),
            EngineError::Solve(err) => CliError {
                code: EXIT_NUMERICAL,
                message: err.to_string(),
            },
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Unconfirmed { .. } => CliError {
                code: EXIT_NOT_TERMINATED,
                message: e.to_string(),
            },
            HarnessError::Engine(inner) => inner.into(),
            HarnessError::Graph(inner) => inner.into(),
            HarnessError::InvalidSuite(msg) => CliError::usage(msg),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn parse_criterion(spec: &str) -> Result<TerminationCriterion, CliError> {
    TerminationCriterion::parse(spec).map_err(CliError::usage)
}

fn parse_sw_spec(spec: &str) -> Result<(usize, usize, f64), CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(CliError::usage(format!(
            "small-world spec must be N,DEGREE[,BETA], got {spec:?}"
        )));
    }
    let n = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("cannot parse node count from {:?}", parts[0])))?;
    let degree = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("cannot parse degree from {:?}", parts[1])))?;
    let beta = match parts.get(2) {
        Some(b) => b
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("cannot parse beta from {b:?}")))?,
        None => DEFAULT_BETA,
    };
    Ok((n, degree, beta))
}

fn load_graph(source: &GraphSourceArgs, tuning: &GraphTuningArgs) -> Result<Graph, CliError> {
    let mut graph = if let Some(path) = &source.graph {
        parse_edge_list(&read_file(path)?)?
    } else if let Some(path) = &source.tntp {
        let weight_column = WeightColumn::parse(&tuning.weight_col).map_err(CliError::usage)?;
        let options = TntpOptions {
            weight_column,
            source: tuning.source,
            sink: tuning.sink,
        };
        return Ok(parse_tntp(&read_file(path)?, options)?.0);
    } else if let Some(n) = source.complete {
        gen_complete(n, tuning.wmin, tuning.wmax, tuning.seed)?
    } else if let Some(spec) = &source.sw {
        let (n, degree, beta) = parse_sw_spec(spec)?;
        gen_small_world(n, degree, beta, tuning.wmin, tuning.wmax, tuning.seed)?
    } else {
        unreachable!("clap enforces exactly one graph source");
    };
    if tuning.source.is_some() || tuning.sink.is_some() {
        graph = graph.with_terminals(
            tuning.source.unwrap_or(graph.source()),
            tuning.sink.unwrap_or(graph.sink()),
        )?;
    }
    Ok(graph)
}

fn cmd_gen(args: &GenArgs) -> Result<i32, CliError> {
    let graph = match &args.kind {
        GenKind::Complete(a) => gen_complete(a.n, a.wmin, a.wmax, a.seed)?,
        GenKind::Sw(a) => gen_small_world(a.n, a.degree, a.beta, a.wmin, a.wmax, a.seed)?,
    };
    let out = match &args.kind {
        GenKind::Complete(a) => &a.out,
        GenKind::Sw(a) => &a.out,
    };
    write_atomic(out, &emit_edge_list(&graph))?;
    println!("nodes: {}", graph.node_count());
    println!("edges: {}", graph.edge_count());
    Ok(0)
}

fn cmd_solve(args: &SolveArgs) -> Result<i32, CliError> {
    let criterion = parse_criterion(&args.criterion)?;
    let graph = load_graph(&args.source, &args.tuning)?;
    let config = args.engine.config();
    let record = physarum::run(&graph, &config, &criterion)?;

    match &record.final_path {
        Some(p) => {
            let nodes: Vec<String> = p.nodes().iter().map(|n| n.to_string()).collect();
            println!("path: {}", nodes.join(" "));
            println!("length: {}", p.length());
        }
        None => {
            println!("path: -");
            println!("length: -");
        }
    }
    println!("iterations: {}", record.iterations_used);
    println!("terminated_by: {}", record.terminated_by.label());

    if let Some(path) = &args.trace {
        write_atomic(path, &trace_jsonl(&record.trace))?;
    }
    Ok(match record.terminated_by {
        TerminatedBy::Criterion => 0,
        TerminatedBy::Budget => EXIT_NOT_TERMINATED,
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<i32, CliError> {
    let file: BenchConfigFile = match &args.config {
        Some(path) => serde_json::from_str(&read_file(path)?).map_err(|e| {
            CliError::usage(format!("invalid bench config {}: {e}", path.display()))
        })?,
        None => BenchConfigFile::default(),
    };

    let sizes = args.sizes.clone().or(file.sizes).unwrap_or(vec![10, 100]);
    let count = args.count.or(file.count).unwrap_or(50);
    let criteria_specs = args
        .criteria
        .clone()
        .or(file.criteria)
        .unwrap_or_else(|| vec!["eps=1e-2".into(), "k=30".into()]);
    let criteria = criteria_specs
        .iter()
        .map(|s| parse_criterion(s))
        .collect::<Result<Vec<_>, _>>()?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let budget = args.budget.or(file.budget).unwrap_or(10_000);
    let out = args
        .out
        .clone()
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("bench"));

    let mut spec = SuiteSpec::new(sizes, count, criteria, seed, budget);
    spec.weight_min = args.wmin.or(file.wmin).unwrap_or(1);
    spec.weight_max = args.wmax.or(file.wmax).unwrap_or(10_000);
    spec.jobs = args.jobs.or(file.jobs).unwrap_or(0);

    let result = run_success_suite(&spec)?;
    let success_csv = success_table_csv(&result.table);

    let success_path = with_suffix(&out, ".success.csv");
    let runtime_path = with_suffix(&out, ".runtime.csv");
    write_atomic(&success_path, &success_csv)?;
    write_atomic(&runtime_path, &runtime_table_csv(&result.table))?;

    print!("{success_csv}");
    eprintln!(
        "wrote {} and {}",
        success_path.display(),
        runtime_path.display()
    );
    Ok(0)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn print_tpoint_report(report: &TPointReport) {
    let first = &report.runs[0];
    println!("tpoint_iteration: {}", first.tpoint_iteration);
    println!("confirmed: {}", first.confirmed);
    println!("time_to_tpoint_s: {:.6}", first.time_to_tpoint_s);
}

fn cmd_tpoint(args: &TpointArgs) -> Result<i32, CliError> {
    let criterion = parse_criterion(&args.criterion)?;
    let graph = load_graph(&args.source, &args.tuning)?;
    let config = args.engine.config();
    let report = run_tpoint_eval(&graph, &config, &criterion, args.repeats, args.window)?;
    print_tpoint_report(&report);
    if let Some(path) = &args.out {
        write_atomic(path, &tpoint_report_csv(&report))?;
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Tpoint(args) => cmd_tpoint(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
