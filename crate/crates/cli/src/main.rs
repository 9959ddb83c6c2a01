use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use meancut::check::OracleKind;
use meancut::sweep::Metric;
use meancut::{KernelKind, Preset, TruthColumn};

mod commands;

/// MeanCut clustering with path-based similarities.
#[derive(Debug, Parser)]
#[command(name = "meancut", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a CSV file and write one label per row.
    Cluster(ClusterArgs),
    /// Score a (K, percentile) grid against truth labels.
    Sweep(SweepArgs),
    /// Write a synthetic dataset as CSV, truth in the last column.
    Gen(GenArgs),
    /// Cross-check a fast routine against its brute-force reference.
    Oracle(OracleArgs),
    /// Time spanning-tree construction over a ratio sweep.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    input: PathBuf,
    /// Column holding truth labels: `first`, `last` or a 0-based index.
    #[arg(long)]
    truth_col: Option<TruthColumn>,
    /// Skip min-max scaling of features to [0, 1].
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long, default_value = "laplacian")]
    kernel: KernelKind,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Component radius of the two-phase tree, as a fraction of the bounding-box diagonal.
    #[arg(long, default_value_t = 0.2)]
    ratio: f64,
    /// Clusters smaller than this become noise (-1).
    #[arg(long, default_value_t = 0)]
    noise_threshold: usize,
    /// Accepted for a uniform flag surface; clustering itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Neighbor count for density scores.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Fraction of lowest-DGF points held out as junction points.
    #[arg(long, default_value_t = 0.0)]
    percentile: f64,
    /// Labels CSV; stdout when omitted.
    #[arg(long)]
    out_labels: Option<PathBuf>,
    /// Metrics JSON (needs truth labels); stderr when omitted.
    #[arg(long)]
    out_metrics: Option<PathBuf>,
    /// Per-row density and DGF scores CSV.
    #[arg(long)]
    out_scores: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, default_value_t = 10)]
    k_min: usize,
    #[arg(long, default_value_t = 40)]
    k_max: usize,
    #[arg(long, default_value_t = 1)]
    k_step: usize,
    #[arg(long, default_value_t = 0.6)]
    p_min: f64,
    #[arg(long, default_value_t = 0.99)]
    p_max: f64,
    #[arg(long, default_value_t = 0.01)]
    p_step: f64,
    /// Metric the rows are ranked by: acc, nmi or ari.
    #[arg(long, default_value = "acc")]
    rank_by: Metric,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    preset: Preset,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// One of pathsim, mst, hungarian, meancut.
    kind: OracleKind,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Only `mst` is available.
    #[arg(default_value = "mst")]
    task: String,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 0.05)]
    ratio_min: f64,
    #[arg(long, default_value_t = 0.95)]
    ratio_max: f64,
    #[arg(long, default_value_t = 0.05)]
    ratio_step: f64,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.cmd {
        Command::Cluster(a) => commands::cluster(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Gen(a) => commands::gen(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Bench(a) => commands::bench(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
