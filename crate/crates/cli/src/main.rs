//! `mfloq`: designs imaginary Floquet drives for target manifolds and
//! checks the duality numerically. Exit codes: 0 success, 2 invalid
//! configuration, 3 numerical failure.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, Preset, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(manifold_floquet::Error),
    Io(String),
}

impl From<manifold_floquet::Error> for CliError {
    fn from(e: manifold_floquet::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use manifold_floquet::Error as E;
        match self {
            CliError::Config(_) | CliError::Core(E::Validation(_)) => 2,
            CliError::Core(E::Numerical(_) | E::Range(_)) | CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "mfloq", version, about = "Imaginary Floquet drives and their curved-manifold duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drive profile for a target conformal factor.
    Design(RunConfig),
    /// Lab Floquet spectra against the curved-space operator.
    Duality(RunConfig),
    /// Sweep of the odd target component.
    PtSweep(RunConfig),
    /// Stroboscopic evolution of a Gaussian packet.
    Evolve(RunConfig),
    /// Torus sectors; same as `duality --preset torus`.
    Torus(RunConfig),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Design(c) => commands::design(&resolve(&RunConfig::load(c)?, Preset::Sinusoidal)?),
        Command::Duality(c) => commands::duality(&resolve(&RunConfig::load(c)?, Preset::Sinusoidal)?),
        Command::PtSweep(c) => commands::pt(&resolve(&RunConfig::load(c)?, Preset::Sinusoidal)?),
        Command::Evolve(c) => commands::evolve(&resolve(&RunConfig::load(c)?, Preset::Sinusoidal)?),
        Command::Torus(c) => {
            let c = RunConfig::load(c)?;
            let c = RunConfig { preset: Some("torus".into()), ..c };
            commands::torus(&resolve(&c, Preset::Torus)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mfloq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
