use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use distdetect_cli::config::{ConfigFile, ExperimentSpec, Overrides, OUTPUT_DIR_ENV};
use distdetect_cli::{format_table, run_cli};

/// Compare distributed detection rules on ring-lattice agent networks.
#[derive(Debug, Parser)]
#[command(name = "distdetect", version)]
struct Args {
    /// TOML experiment file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Update rule to run (LoAB, LiAB, BLoA, BLiA, BLiAD, BLoAD). Repeatable.
    #[arg(long = "rule")]
    rules: Vec<String>,
    /// Scenario preset (clustered, mixed) or inline network name. Repeatable.
    #[arg(long = "scenario")]
    scenarios: Vec<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; trial k of every cell uses a seed derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Convergence tolerance on every agent's belief in the true state.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Output directory for trials.csv, summary.json and trajectories/.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Dump per-round beliefs for every trial.
    #[arg(long)]
    trajectories: bool,
}

fn run(args: Args) -> Result<()> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let flags = Overrides {
        rules: args.rules,
        scenarios: args.scenarios,
        trials: args.trials,
        seed: args.seed,
        threshold: args.threshold,
        max_rounds: args.max_rounds,
        output: args.output,
        trajectories: args.trajectories,
    };
    let env_output = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let spec = ExperimentSpec::resolve(file, flags, env_output)?;
    let report = run_cli(&spec)?;
    for warning in &report.summary.warnings {
        eprintln!("warning: {warning}");
    }
    print!("{}", format_table(&report.summary.cells));
    println!(
        "wrote {} and {}",
        report.csv_path.display(),
        report.summary_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
