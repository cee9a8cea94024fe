use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lp_lab::cli::{run, Experiment, ExperimentConfig};

/// Littlewood-Paley experiments on a periodic grid.
#[derive(Debug, Parser)]
#[command(name = "lp-lab", version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,

    /// TOML configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory, overriding `out_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,

    /// RNG seed, overriding `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match drive(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn drive(args: &Args) -> lp_lab::Result<bool> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let outcome = run(&cfg, args.experiment)?;
    outcome.write_to(&cfg.out_dir)?;
    print!("{}", outcome.report.render());
    Ok(outcome.report.all_passed())
}
