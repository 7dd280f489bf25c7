//! `fraclat` command-line front end.

mod args;
mod commands;
mod config;
mod error;
mod output;

use clap::Parser;

pub use args::Cli;
use args::Command;
use error::CliError;

fn run() -> Result<(), CliError> {
    let argv = config::expand(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help and version go to stdout with status 0, usage errors exit 2
            e.print().map_err(CliError::from)?;
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Matrix(a) => commands::matrix(&a),
        Command::Dispersion(a) => commands::dispersion(&a),
        Command::Kernel(a) => commands::kernel(&a),
        Command::Limit(a) => commands::limit(&a),
        Command::Evolve(a) => commands::evolve(&a),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("fraclat: {e}");
        std::process::exit(e.exit_code());
    }
}
