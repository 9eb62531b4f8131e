//! Command-line front end for Bingham simulation and exchange-algorithm
//! inference. The binary is a thin wrapper around [`run`].

pub mod args;
pub mod commands;
pub mod error;
pub mod io;

use std::ffi::OsString;

pub use args::{Cli, Command, Preset};
pub use commands::Outcome;
pub use error::CliError;
pub use io::KeyValues;

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Fit(a) => commands::fit(a),
        Command::Diagnose(a) => commands::diagnose(a),
        Command::Compare(a) => commands::compare(a),
        Command::Oracle(a) => commands::oracle(a),
    }
}

/// Parses an argument list (program name first) and runs it. Parse failures,
/// including `--help`, come back as usage errors.
pub fn run_from<I, T>(argv: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}
