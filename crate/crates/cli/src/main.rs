use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cat0_feas::commands::{execute, Command};
use cat0_feas::config;
use cat0_feas::error::CliError;

/// Run CAT(0) feasibility experiments from a JSON configuration.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json and side files.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the configuration's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads over instances.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main_inner(args: &Args) -> Result<cat0_feas::report::Outcome, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let cfg = config::parse(&text)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    execute(args.command, &cfg, seed, args.jobs, &args.out)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(&args) {
        Ok(outcome) => {
            let status = outcome.exit_status();
            eprintln!("{}: {:?}", args.command.name(), outcome);
            ExitCode::from(status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_status().code() as u8)
        }
    }
}
