//! Command-line driver: generation and verification of lower-bound graphs,
//! reduction compilation and checking, protocol runs, network simulation and
//! CSV/JSON experiment output.
//!
//! Exit codes: 0 on success or a passing check, 1 when a verification,
//! reduction check or protocol run fails, 2 on invalid parameters or input.
//! Structured output goes to stdout (or `--out`); diagnostics to stderr.
//! Every command is a pure function of its flags and seed; the default seed
//! is the fixed constant `0xC0FFEE`, never the clock.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cliquebound::congest::{measure_cut_traffic, run_folklore_detection, CongestNetwork};
use cliquebound::error::Error;
use cliquebound::fileio;
use cliquebound::graph::VertexSet;
use cliquebound::lbgraph::{
    construct_lower_bound_graph, lemma_statistics, verify_lower_bound_graph, ConstructionStats,
    LemmaStatistics,
};
use cliquebound::reduction::{build_instance, check_reduction, CheckMode, DisjInstance, PartitionedGraph};
use cliquebound::twoparty::{bit_budget, verify_protocol, Phase, ProtocolCase};

/// Default seed when `--seed` is omitted. A constant, so repeated
/// invocations are byte-identical.
const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Parser)]
#[command(name = "cliquebound", version, about = "Gadget graphs for clique detection under communication limits", max_term_width = 100)]
struct Cli {
    /// Base seed for all randomized commands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads for the fan-out commands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format; only `lb-stats` supports csv (its default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a lower-bound graph and write it to a file.
    GenLb(GenLbArgs),
    /// Verify a lower-bound graph file against the four defining items.
    VerifyLb(VerifyLbArgs),
    /// Per-seed construction statistics across side sizes.
    LbStats(LbStatsArgs),
    /// Compile a disjointness instance into a partitioned clique graph.
    Reduce(ReduceArgs),
    /// Sweep disjointness instances against the clique oracle.
    CheckReduction(CheckReductionArgs),
    /// Run the two-party clique-listing protocol on a partitioned graph.
    Protocol(ProtocolArgs),
    /// Simulate neighborhood-broadcast clique detection.
    Congest(CongestArgs),
}

#[derive(Args)]
struct GenLbArgs {
    /// Side size (at least 4).
    #[arg(long)]
    n: usize,
    /// Destination file for the graph.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyLbArgs {
    /// Lower-bound graph file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Edge budget for item 1.
    #[arg(long)]
    m_bound: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LbStatsArgs {
    /// Comma-separated side sizes, e.g. 64,128,256.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Seeds per size: base seed, base+1, ...
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Lower-bound graph file.
    #[arg(long)]
    lbg: PathBuf,
    /// Alice's bits, e.g. 1001.
    #[arg(long)]
    x: String,
    /// Bob's bits, same length.
    #[arg(long)]
    y: String,
    /// Target clique size (at least 4).
    #[arg(long)]
    ell: usize,
    /// Destination graph file; the A-side ids go to `<out>.partition`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckReductionArgs {
    /// Lower-bound graph file.
    #[arg(long)]
    lbg: PathBuf,
    /// Target clique size (at least 4).
    #[arg(long)]
    ell: usize,
    /// Check all 4^k instances (k at most 10).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Check this many uniformly sampled instances.
    #[arg(long)]
    samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProtocolArgs {
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Partition file: one line of A-side ids.
    #[arg(long)]
    partition: PathBuf,
    /// Accepted for compatibility; output is always JSON.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CongestArgs {
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Clique size to detect (at least 3).
    #[arg(long)]
    ell: usize,
    /// Per-edge, per-round, per-direction bandwidth in bits.
    #[arg(long)]
    bandwidth: u64,
    /// Partition file; enables cut-traffic metering.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Refuse topologies larger than this.
    #[arg(long, default_value_t = 256)]
    max_n: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GenLbSummary<'a> {
    n: usize,
    seed: u64,
    out: &'a str,
    stats: ConstructionStats,
}

#[derive(Serialize)]
struct ReduceSummary<'a> {
    n_vertices: usize,
    n_edges: usize,
    cut_size: usize,
    side_a_size: usize,
    side_b_size: usize,
    graph_out: &'a str,
    partition_out: &'a str,
}

#[derive(Serialize)]
struct ProtocolOutput<'a> {
    case: ProtocolCase,
    phases: &'a [Phase],
    total_bits: u64,
    budget: u64,
    cliques: &'a [VertexSet],
    correct_vs_oracle: bool,
}

#[derive(Serialize)]
struct CongestOutput {
    rounds_used: u32,
    detected: bool,
    detecting_nodes: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cut_bits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound_r_m_b: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore the error if a pool already exists; sizing is best effort.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    let seed = cli.seed;
    let format = cli.format;
    match cli.command {
        Command::GenLb(args) => {
            require_json(format)?;
            let (lbg, stats) = construct_lower_bound_graph(args.n, seed)?;
            std::fs::write(&args.out, fileio::format_lower_bound_graph(&lbg)?)?;
            let summary = GenLbSummary {
                n: args.n,
                seed,
                out: &args.out.display().to_string(),
                stats,
            };
            emit(&None, &to_json(&summary))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyLb(args) => {
            require_json(format)?;
            let lbg = fileio::read_lower_bound_graph(&args.input)?;
            let report = verify_lower_bound_graph(&lbg, args.m_bound);
            emit(&args.out, &to_json(&report))?;
            Ok(pass_fail(report.passed))
        }
        Command::LbStats(args) => {
            let seeds: Vec<u64> = (seed..seed + args.seeds as u64).collect();
            let mut tables = Vec::new();
            for &n in &args.n_list {
                tables.push(lemma_statistics(n, &seeds)?);
            }
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => stats_csv(&tables),
                Format::Json => to_json(&tables),
            };
            emit(&args.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce(args) => {
            require_json(format)?;
            let lbg = fileio::read_lower_bound_graph(&args.lbg)?;
            let inst = DisjInstance::from_bitstrings(&args.x, &args.y)?;
            let pg = build_instance(&lbg, &inst, args.ell)?;
            let partition_out = args.out.with_extension(format!(
                "{}partition",
                args.out
                    .extension()
                    .map(|e| format!("{}.", e.to_string_lossy()))
                    .unwrap_or_default()
            ));
            std::fs::write(&args.out, fileio::format_graph(pg.graph()))?;
            std::fs::write(&partition_out, fileio::format_partition(pg.side_a()))?;
            let summary = ReduceSummary {
                n_vertices: pg.graph().n_vertices(),
                n_edges: pg.graph().edge_count(),
                cut_size: pg.cut_size(),
                side_a_size: pg.side_a().len(),
                side_b_size: pg.side_b().len(),
                graph_out: &args.out.display().to_string(),
                partition_out: &partition_out.display().to_string(),
            };
            emit(&None, &to_json(&summary))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckReduction(args) => {
            require_json(format)?;
            let lbg = fileio::read_lower_bound_graph(&args.lbg)?;
            let mode = match (args.exhaustive, args.samples) {
                (true, None) => CheckMode::Exhaustive,
                (false, Some(count)) => CheckMode::Sampled { count, seed },
                _ => {
                    return Err(Error::InvalidParameter(
                        "pass exactly one of --exhaustive or --samples N".into(),
                    ))
                }
            };
            let report = check_reduction(&lbg, args.ell, mode)?;
            emit(&args.out, &to_json(&report))?;
            Ok(pass_fail(report.passed))
        }
        Command::Protocol(args) => {
            require_json(format)?;
            let graph = fileio::read_graph(&args.graph)?;
            let side_a = fileio::read_partition(&args.partition)?;
            let pg = PartitionedGraph::new(graph, side_a)?;
            let check = verify_protocol(&pg);
            let output = ProtocolOutput {
                case: check.result.case_taken,
                phases: check.ledger.phases(),
                total_bits: check.ledger.total_bits(),
                budget: bit_budget(pg.graph().n_vertices(), pg.cut_size()),
                cliques: &check.result.cliques,
                correct_vs_oracle: check.correct,
            };
            emit(&args.out, &to_json(&output))?;
            Ok(pass_fail(check.correct && check.within_budget))
        }
        Command::Congest(args) => {
            require_json(format)?;
            let graph = fileio::read_graph(&args.graph)?;
            if graph.n_vertices() > args.max_n {
                return Err(Error::InvalidParameter(format!(
                    "topology has {} vertices, over the --max-n limit {}",
                    graph.n_vertices(),
                    args.max_n
                )));
            }
            let net = CongestNetwork::new(graph.clone(), args.bandwidth)?;
            let trace = run_folklore_detection(&net, args.ell)?;
            let (cut_bits, bound) = match args.partition {
                Some(path) => {
                    let side_a = fileio::read_partition(&path)?;
                    let pg = PartitionedGraph::new(graph, side_a)?;
                    let bits = measure_cut_traffic(&trace, &pg)?;
                    let bound =
                        trace.rounds_used() as u64 * pg.cut_size() as u64 * args.bandwidth;
                    (Some(bits), Some(bound))
                }
                None => (None, None),
            };
            let output = CongestOutput {
                rounds_used: trace.rounds_used(),
                detected: trace.detected(),
                detecting_nodes: trace.detecting_nodes(),
                cut_bits,
                bound_r_m_b: bound,
            };
            emit(&args.out, &to_json(&output))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn require_json(format: Option<Format>) -> Result<(), Error> {
    match format {
        Some(Format::Csv) => Err(Error::InvalidParameter(
            "this command only supports --format json".into(),
        )),
        _ => Ok(()),
    }
}

fn pass_fail(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}

fn stats_csv(tables: &[LemmaStatistics]) -> String {
    let mut out = String::from(
        "n,seed,k_total,h_size,edge_count,pairs_over_threshold_a,pairs_over_threshold_b\n",
    );
    for table in tables {
        for run in &table.runs {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                table.n,
                run.seed,
                run.stats.k_total,
                run.stats.h_size,
                run.stats.edge_count,
                run.stats.pairs_over_threshold_a,
                run.stats.pairs_over_threshold_b
            ));
        }
    }
    out
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
