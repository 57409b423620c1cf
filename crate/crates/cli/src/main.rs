mod commands;
mod common;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{allocate, budget, catalog, chevron, landscape, micromotion, strength, zz};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(floqmap::Error),
}

impl From<floqmap::Error> for CliError {
    fn from(e: floqmap::Error) -> Self {
        match e {
            floqmap::Error::Config(_) | floqmap::Error::Io(_) => CliError::Usage(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "floqmap", version, about = "Sideband landscapes, error budgets and frequency allocation for modulated circuits")]
struct Cli {
    /// Seed for randomized search tie-breaks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=256))]
    workers: u32,
    /// Directory for CSV and JSON outputs; without it the main result is printed.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition table with detunings and base strengths.
    Catalog(catalog::Args),
    /// Largest collision angle over a drive-frequency sweep.
    Landscape(landscape::Args),
    /// Population of a tracked state versus drive frequency and time.
    Chevron(chevron::Args),
    /// Fourier peaks of population micromotion matched to sideband lines.
    Micromotion(micromotion::Args),
    /// Analytic sideband strengths versus drive amplitude.
    StrengthSweep(strength::Args),
    /// Static ZZ versus coupler frequency, or dynamic ZZ along an amplitude ramp.
    Zz(zz::Args),
    /// Population-error budget of a target sideband.
    ErrorBudget(budget::Args),
    /// Solve a frequency-allocation problem.
    Allocate(allocate::Args),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers as usize)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let sink = output::Sink::new(cli.out.clone())?;
    pool.install(|| match &cli.command {
        Command::Catalog(a) => catalog::run(a, &sink),
        Command::Landscape(a) => landscape::run(a, &sink),
        Command::Chevron(a) => chevron::run(a, &sink),
        Command::Micromotion(a) => micromotion::run(a, &sink),
        Command::StrengthSweep(a) => strength::run(a, &sink),
        Command::Zz(a) => zz::run(a, &sink),
        Command::ErrorBudget(a) => budget::run(a, &sink),
        Command::Allocate(a) => allocate::run(a, cli.seed, &sink),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Domain(_) => 1,
            })
        }
    }
}
