mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// What a successful command found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Broken invariants found while running count as violations; anything else is bad input.
fn exit_code(err: &anyhow::Error) -> u8 {
    use halftsp::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::Certificate(_) | Error::Hierarchy(_) | Error::Internal(_)) => 1,
        _ => 2,
    }
}

/// A closed downstream pipe (e.g. `| head`) is not a failure of the command.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().filter_map(|e| e.downcast_ref::<std::io::Error>()).any(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}
