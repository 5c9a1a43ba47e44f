//! `tep`: trajectories of entropy production, the non-Markovianity witness,
//! parameter sweeps and dilation-oracle checks for three apparatus channels.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
//! 4 oracle check failure, 1 i/o error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{OracleArgs, SweepArgs};
use config::Settings;
use error::CliError;

#[derive(Parser)]
#[command(name = "tep", version, about = "Total entropy production and its non-Markovianity witness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-time trajectory table
    Simulate(Common),
    /// Accumulated negative production rate for a fixed or optimized initial state
    Witness(Common),
    /// Witness over a range of one model parameter
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Entropy identities checked on the explicit environment dilation
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

#[derive(clap::Args)]
struct Common {
    #[command(flatten)]
    settings: Settings,
    /// JSON config file; flags take precedence over its values
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<Settings, CliError> {
        Settings::load(self.settings.clone(), self.config.as_deref())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, kind) = match &cli.command {
        Command::Simulate(c) => (c, "simulate"),
        Command::Witness(c) => (c, "witness"),
        Command::Sweep { common, .. } => (common, "sweep"),
        Command::Oracle { common, .. } => (common, "oracle"),
    };
    let mut settings = common.load()?;
    if kind == "witness" && settings.format.is_none() {
        settings.format = Some(config::Format::Json);
    }
    let config = settings.resolve()?;
    if let Some(jobs) = settings.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))?;
    }
    match &cli.command {
        Command::Simulate(_) => commands::run_simulate(&config, &settings),
        Command::Witness(_) => commands::run_witness(&config, &settings),
        Command::Sweep { sweep, .. } => commands::run_sweep(&config, &settings, sweep),
        Command::Oracle { oracle, .. } => commands::run_oracle(&config, &settings, oracle),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
