//! `cavitylattice`: command-line driver for the cavity-lattice simulation
//! toolkit. One subcommand per artifact family; JSON configs with unknown
//! keys rejected; deterministic outputs (identical config + seed gives
//! byte-identical files). Exit codes: 2 = config/schema error, 3 =
//! computation error, 4 = I/O error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use output::{CliError, CliResult, Meta, Sink};

#[derive(Parser)]
#[command(name = "cavitylattice", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Cap on worker threads for parallel stages.
    #[arg(long)]
    jobs: Option<usize>,
    /// Base random seed (trajectory ensembles use seed..seed+n).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate light-matter coupling tensors over the lattice geometry.
    Couplings(RunArgs),
    /// Ground state / spectrum of a preset or explicit model.
    Spectrum(RunArgs),
    /// Phase-diagram sweep with boundary extraction.
    Sweep(RunArgs),
    /// Measurement sectors and projected-Hamiltonian term survival.
    Zeno(RunArgs),
    /// Quantum-jump trajectory ensemble.
    Trajectory(RunArgs),
}

fn load_config<T: DeserializeOwned>(args: &RunArgs, subcommand: &str) -> CliResult<(T, Meta)> {
    let raw = std::fs::read(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let parsed: T = serde_json::from_slice(&raw)
        .map_err(|e| CliError::Schema(format!("{}: {e}", args.config.display())))?;
    Ok((parsed, Meta::new(subcommand, &raw)))
}

fn run(cli: Cli) -> CliResult<()> {
    let args = match &cli.command {
        Command::Couplings(a)
        | Command::Spectrum(a)
        | Command::Sweep(a)
        | Command::Zeno(a)
        | Command::Trajectory(a) => a,
    };
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Compute(format!("cannot configure thread pool: {e}")))?;
    }

    match &cli.command {
        Command::Couplings(args) => {
            let (config, meta) = load_config::<config::CouplingsConfig>(args, "couplings")?;
            commands::cmd_couplings(&config, &Sink::new(&args.out, meta)?)
        }
        Command::Spectrum(args) => {
            let (config, meta) = load_config::<config::SpectrumConfig>(args, "spectrum")?;
            commands::cmd_spectrum(&config, &Sink::new(&args.out, meta)?)
        }
        Command::Sweep(args) => {
            let (config, meta) = load_config::<config::SweepConfig>(args, "sweep")?;
            commands::cmd_sweep(&config, &Sink::new(&args.out, meta)?)
        }
        Command::Zeno(args) => {
            let (config, meta) = load_config::<config::ZenoConfig>(args, "zeno")?;
            commands::cmd_zeno(&config, &Sink::new(&args.out, meta)?)
        }
        Command::Trajectory(args) => {
            let (config, meta) = load_config::<config::TrajectoryConfig>(args, "trajectory")?;
            commands::cmd_trajectory(&config, args.seed, &Sink::new(&args.out, meta)?)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
