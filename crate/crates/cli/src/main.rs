mod commands;
mod config;
mod output;
mod report;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};

/// Exit 2 for bad input, 3 for numerical failure, 1 for I/O trouble.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<waveguide_core::Error> for CliError {
    fn from(e: waveguide_core::Error) -> Self {
        match e {
            waveguide_core::Error::Io(io) => CliError::Io(io.to_string()),
            e if e.is_validation() => CliError::Validation(e.to_string()),
            e => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.command.name(), cli.command.flags())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start {} workers: {e}", cfg.workers)))?;
    pool.install(|| match &cli.command {
        Command::Spectrum(_) => commands::spectrum(&cfg),
        Command::Threshold(_) => commands::threshold(&cfg),
        Command::Groundstate(_) => commands::groundstate(&cfg),
        Command::Omegastar(_) => commands::omegastar(&cfg),
        Command::Evolve(_) => commands::evolve(&cfg),
        Command::Report { dir, .. } => report::report(&cfg, dir.as_deref()),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("waveguide: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
