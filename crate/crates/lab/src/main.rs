//! `greedylab`: run weak greedy approximation experiments, sweep parameter
//! grids, diagnose weakness sequences, and re-verify stored traces.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use greedylab::config::{DiagConfig, ExperimentConfig, SweepConfig};
use greedylab::runner;

#[derive(Parser)]
#[command(
    name = "greedylab",
    about = "Greedy approximation laboratory: weak greedy algorithms with convergence-bound verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one experiment config; exit 0 iff all enabled verifications
    /// pass.
    Run {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for trace and report artifacts.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Replace every generator seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a parameter grid x seeds and aggregate pass rates per cell.
    Sweep {
        /// Sweep config (JSON with `base`, `grid`, `trials`).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (default: GREEDYLAB_WORKERS, then all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Evaluate the convergence-criterion series of a weakness sequence.
    Diag {
        /// Diagnostics config (JSON with `tau` and optional `horizon`).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the config's horizon.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Re-verify a stored trace JSON against the bound formulas.
    VerifyTrace {
        #[arg(long)]
        trace: PathBuf,
        /// Directory for the verification report (report printed either way).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Absolute tolerance for measured-versus-bound comparisons.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed } => {
            let base_dir = config.parent().unwrap_or(std::path::Path::new(".")).to_path_buf();
            ExperimentConfig::from_file(&config)
                .and_then(|cfg| runner::run_experiment(&cfg, &base_dir, &out, seed, false))
                .map(|outcome| outcome.pass)
        }
        Command::Sweep {
            config,
            out,
            workers,
        } => {
            let base_dir = config.parent().unwrap_or(std::path::Path::new(".")).to_path_buf();
            let workers = workers.or_else(|| {
                std::env::var("GREEDYLAB_WORKERS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            SweepConfig::from_file(&config)
                .and_then(|cfg| runner::run_sweep(&cfg, &base_dir, &out, workers))
        }
        Command::Diag {
            config,
            out,
            horizon,
        } => {
            let base_dir = config.parent().unwrap_or(std::path::Path::new(".")).to_path_buf();
            DiagConfig::from_file(&config)
                .and_then(|cfg| runner::run_diag(&cfg, &base_dir, &out, horizon))
                .map(|()| true)
        }
        Command::VerifyTrace {
            trace,
            out,
            tolerance,
        } => runner::run_verify_trace(&trace, out.as_deref(), tolerance),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
