//! `dynls` command-line front end.
//!
//! Exit codes: 0 success, 2 parse error, 3 infeasible configuration,
//! 1 anything else (I/O). The log level comes from `DYNLS_LOG`.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use dynls::io::{
    apply_weights, parse_graph, read_runs, report_table, run_benchmark, summarize, BenchError, BenchSpec, Format,
    ParsedGraph, WeightMode, CSV_HEADER,
};
use dynls::oracle::{brute_force_mwis, MAX_BRANCH_AND_BOUND_VERTICES};
use dynls::{solve, Graph, SolveError, SolverConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "dynls", version, about = "Maximum weighted independent set by dynamic local search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one graph heuristically.
    Solve(SolveArgs),
    /// Solve a tiny graph exactly.
    Exact(GraphArgs),
    /// Run a benchmark description, writing one CSV row per run.
    Bench(BenchArgs),
    /// Summarize a benchmark CSV as a table.
    Report { csv: PathBuf },
}

#[derive(Args)]
struct GraphArgs {
    file: PathBuf,
    /// Defaults to metis for .graph/.metis files, edgelist otherwise.
    #[arg(long)]
    format: Option<Format>,
    /// file, family-a or family-b:<seed>. Defaults to file weights when
    /// present, family-a otherwise.
    #[arg(long)]
    weights: Option<WeightMode>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Seconds.
    #[arg(long, default_value_t = 1000.0, allow_negative_numbers = true)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    no_reduce: bool,
    /// Seconds.
    #[arg(long, default_value_t = 200.0, allow_negative_numbers = true)]
    reduce_cap: f64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct BenchArgs {
    spec: PathBuf,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary destination; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

enum Failure {
    Parse(String),
    Infeasible(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Infeasible(m) | Failure::Other(m) => m,
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Other(format!("{}: {e}", path.display()))
}

fn seconds(s: f64, what: &str) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(s).map_err(|_| Failure::Infeasible(format!("{what} must be a non-negative number of seconds")))
}

fn load(args: &GraphArgs) -> Result<(ParsedGraph, Graph), Failure> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| io_failure(&args.file, e))?;
    let format = args.format.unwrap_or_else(|| Format::from_path(&args.file));
    let parsed =
        parse_graph(&text, format).map_err(|e| Failure::Parse(format!("{}: {e}", args.file.display())))?;
    let g = apply_weights(&parsed, args.weights).map_err(|e| Failure::Infeasible(e.to_string()))?;
    Ok((parsed, g))
}

fn labels(parsed: &ParsedGraph, set: &[usize]) -> Vec<u64> {
    let mut out: Vec<u64> = set.iter().map(|&v| parsed.label(v)).collect();
    out.sort_unstable();
    out
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn run_solve(args: &SolveArgs) -> Result<(), Failure> {
    let (parsed, g) = load(&args.graph)?;
    let cfg = SolverConfig {
        time_limit: seconds(args.time_limit, "time limit")?,
        seed: args.seed,
        reduce_cap: seconds(args.reduce_cap, "reduce cap")?,
        no_reduce: args.no_reduce,
        ..SolverConfig::default()
    };
    let r = solve(&g, &cfg).map_err(|e| match e {
        SolveError::InvalidConfig(m) => Failure::Infeasible(m),
        other => Failure::Other(other.to_string()),
    })?;
    let vertices = labels(&parsed, &r.best_set);
    let mut out = io::stdout().lock();
    let written = if args.json {
        let doc = json!({
            "instance": args.graph.file.display().to_string(),
            "n": g.num_vertices(),
            "m": g.num_edges(),
            "kernel_n": r.kernel_n,
            "kernel_m": r.kernel_m,
            "seed": args.seed,
            "weight": r.best_weight,
            "time_to_best": r.time_to_best,
            "iterations": r.iterations,
            "vertices": vertices,
        });
        writeln!(out, "{doc}")
    } else if args.csv {
        let name = args.graph.file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        writeln!(out, "{}", CSV_HEADER.join(",")).and_then(|_| {
            writeln!(
                out,
                "{name},{},{},{},{},{},{},{:.3}",
                g.num_vertices(),
                g.num_edges(),
                r.kernel_n,
                r.kernel_m,
                args.seed,
                r.best_weight,
                r.time_to_best
            )
        })
    } else {
        writeln!(out, "weight {}", r.best_weight)
            .and_then(|_| writeln!(out, "time_to_best {:.3}", r.time_to_best))
            .and_then(|_| writeln!(out, "vertices {}", join(&vertices)))
    };
    written.map_err(|e| Failure::Other(e.to_string()))
}

fn run_exact(args: &GraphArgs) -> Result<(), Failure> {
    let (parsed, g) = load(args)?;
    let (set, weight) = brute_force_mwis(&g).map_err(|_| {
        Failure::Infeasible(format!(
            "exact solving is limited to {MAX_BRANCH_AND_BOUND_VERTICES} vertices, graph has {}",
            g.num_vertices()
        ))
    })?;
    println!("weight {weight}");
    println!("vertices {}", join(&labels(&parsed, &set)));
    Ok(())
}

fn bench_failure(e: BenchError) -> Failure {
    match e {
        BenchError::InvalidSpec(m) => Failure::Infeasible(m),
        BenchError::Solve { source: SolveError::InvalidConfig(m), .. } => Failure::Infeasible(m),
        other => Failure::Other(other.to_string()),
    }
}

fn run_bench(args: &BenchArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.spec).map_err(|e| io_failure(&args.spec, e))?;
    let spec = BenchSpec::from_json(&text).map_err(|e| Failure::Parse(format!("{}: {e}", args.spec.display())))?;
    let spec = spec.rebase(args.spec.parent().unwrap_or(Path::new(".")));
    let rows = match &args.out {
        Some(path) => run_benchmark(&spec.instances, File::create(path).map_err(|e| io_failure(path, e))?),
        None => run_benchmark(&spec.instances, io::stdout().lock()),
    }
    .map_err(bench_failure)?;
    let summary = serde_json::to_string_pretty(&rows).expect("summary serializes");
    match &args.summary {
        Some(path) => std::fs::write(path, summary + "\n").map_err(|e| io_failure(path, e)),
        None => {
            eprintln!("{summary}");
            Ok(())
        }
    }
}

fn run_report(csv: &Path) -> Result<(), Failure> {
    let file = File::open(csv).map_err(|e| io_failure(csv, e))?;
    let runs = read_runs(file).map_err(|e| match e {
        BenchError::Io(e) => io_failure(csv, e),
        other => Failure::Parse(format!("{}: {other}", csv.display())),
    })?;
    print!("{}", report_table(&summarize(&runs)));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DYNLS_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Exact(args) => run_exact(args),
        Command::Bench(args) => run_bench(args),
        Command::Report { csv } => run_report(csv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
