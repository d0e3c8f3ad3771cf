use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trajmetric::{MetricKind, Normalization};
use trajmetric_cli::{
    parse_named_path, parse_normalization, parse_times, run_batch, run_eval, run_generate, BatchRequest, CliError,
    EvalRequest, MetricOptions, WeightKind,
};

/// Time-weighted trajectory metrics for multi-object tracking evaluation.
#[derive(Parser)]
#[command(name = "trajmetric", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the two-target benchmark scenario (truth.json, e1.json..e4.json).
    Generate {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = trajmetric_cli::scenario::DEFAULT_SEPARATION)]
        separation: f64,
        /// Cut-off the scenario must stay unambiguous for.
        #[arg(long = "c", default_value_t = 5.0)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare one estimate with the truth.
    Eval {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        estimate: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        /// Per-time CSV output.
        #[arg(long, value_name = "CSV")]
        decompose: Option<PathBuf>,
        /// Summary JSON output.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Write the LP (CPLEX LP format); tm-lp only.
        #[arg(long, value_name = "PATH")]
        dump_lp: Option<PathBuf>,
    },
    /// Rank algorithms by their metric averaged over scenarios.
    Batch {
        #[arg(long, conflicts_with_all = ["truth", "estimate"])]
        manifest: Option<PathBuf>,
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Repeatable.
        #[arg(long, value_name = "NAME=PATH", value_parser = parse_named_path)]
        estimate: Vec<(String, PathBuf)>,
        #[command(flatten)]
        metric: MetricArgs,
        /// Order of the batch average; defaults to p.
        #[arg(long)]
        p_prime: Option<f64>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MetricArgs {
    /// tm, tm-lp, d0, dinf or ospa2.
    #[arg(long)]
    metric: MetricKind,
    #[arg(long = "c")]
    c: f64,
    #[arg(long = "p", default_value_t = 1.0)]
    p: f64,
    /// Switching penalty; required for tm and tm-lp.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value = "uniform")]
    weights: WeightKind,
    #[arg(long)]
    rho: Option<f64>,
    /// Comma-separated t₁..t_T.
    #[arg(long, value_parser = parse_times)]
    sampling_times: Option<Vec<f64>>,
    /// JSON file with "w1" and "w2" arrays.
    #[arg(long)]
    custom_weights: Option<PathBuf>,
    #[arg(long, default_value = "none", value_parser = parse_normalization)]
    normalize: Normalization,
}

impl From<MetricArgs> for MetricOptions {
    fn from(a: MetricArgs) -> Self {
        MetricOptions {
            metric: a.metric,
            c: a.c,
            p: a.p,
            gamma: a.gamma,
            weights: a.weights,
            rho: a.rho,
            sampling_times: a.sampling_times,
            custom_weights: a.custom_weights,
            normalize: a.normalize,
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Generate { out_dir, separation, c, seed } => {
            let written = run_generate(&out_dir, separation, c, seed)?;
            Ok(written.iter().map(|p| format!("{}\n", p.display())).collect())
        }
        Command::Eval { truth, estimate, metric, decompose, json, dump_lp } => run_eval(&EvalRequest {
            truth,
            estimate,
            options: metric.into(),
            decompose,
            json,
            dump_lp,
        }),
        Command::Batch { manifest, truth, estimate, metric, p_prime, json } => run_batch(&BatchRequest {
            manifest,
            truth,
            estimates: estimate,
            options: metric.into(),
            p_prime,
            json,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
