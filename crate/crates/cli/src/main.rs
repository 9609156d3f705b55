//! Command-line front end: `simulate`, `analyze`, `sweep` and `figures`.
//!
//! Exit codes: 0 success, 1 invalid configuration or input, 2 runtime failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "specgame",
    version,
    about = "Extended speculation game simulator and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one game and write per-step records.
    Simulate(SimulateArgs),
    /// Fit the Hurst exponent and stylized-fact diagnostics of a record file.
    Analyze(AnalyzeArgs),
    /// Run an ensemble per perturbation level and summarize.
    Sweep(ExperimentArgs),
    /// Produce the data files behind every figure.
    Figures(ExperimentArgs),
}

/// Game parameters; each flag overrides the key of the same name in the config file.
#[derive(Debug, Clone, Default, Args)]
struct GameFlags {
    #[arg(long)]
    n_players: Option<usize>,
    #[arg(long)]
    memory: Option<usize>,
    #[arg(long)]
    n_strategies: Option<usize>,
    #[arg(long)]
    board_lot: Option<u64>,
    #[arg(long)]
    cognitive_threshold: Option<f64>,
    /// Perturbation half-width Pb (config key `perturbation`).
    #[arg(
        long = "pb",
        visible_alias = "perturbation",
        allow_hyphen_values = true
    )]
    perturbation: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    initial_price: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON file with game parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    game: GameFlags,
    /// RNG seed (config key `rng_seed`).
    #[arg(long, visible_alias = "rng-seed")]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Output directory.
    #[arg(long, short, default_value = "out/simulate")]
    output: PathBuf,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Per-step record file (`.csv` or `.jsonl`).
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short, default_value = "out/analyze")]
    output: PathBuf,
    /// Largest ACF lag.
    #[arg(long, default_value_t = 100)]
    max_lag: usize,
    /// Return horizons for the aggregational-Gaussianity profile.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 10, 100])]
    horizons: Vec<usize>,
    /// Use log returns instead of arithmetic price differences for diagnostics.
    #[arg(long)]
    log_returns: bool,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON file with an experiment spec.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    game: GameFlags,
    /// Master seed; trial i uses master + i (config key `master_seed`).
    #[arg(long, visible_alias = "master-seed")]
    seed: Option<u64>,
    /// Trials per perturbation level (config key `n_trials`).
    #[arg(long, visible_alias = "n-trials")]
    trials: Option<usize>,
    /// Comma-separated perturbation levels.
    #[arg(long, value_delimiter = ',')]
    pb_grid: Option<Vec<f64>>,
    /// Output directory (config key `output_dir`).
    #[arg(long, short, visible_alias = "out")]
    output: Option<PathBuf>,
    /// Run trials one after another instead of on the thread pool.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    print_config: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Figures(args) => commands::figures(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
