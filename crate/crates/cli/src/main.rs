//! `rps`: maximum-entropy tables, entropies of JSON documents and
//! numerical verification from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 capacity
//! exceeded, 4 verification failure.

mod args;
mod commands;
mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use rps_core::{Error, LogBase, OptimizerConfig};

use args::{Cli, Command};
use commands::{Settings, VerificationFailed, VerifyArgs};

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Capacity { .. }) => 3,
        Some(_) => 2,
        None if err.is::<VerificationFailed>() => 4,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let settings = Settings {
        base: LogBase::new(cli.base)?,
        precision: cli.precision,
        format: cli.format,
        cap: cli.cap.map(|c| usize::try_from(c).unwrap_or(usize::MAX)),
    };
    let s = &settings;
    let out = match cli.command {
        Command::Enumerate { labels, include_empty } => commands::enumerate(s, &labels, include_empty)?,
        Command::Entropy {
            input,
            kind,
            terms,
            renormalize,
        } => commands::entropy(s, input.as_deref(), kind, terms, renormalize)?,
        Command::Maxent {
            n,
            kind,
            emit_distribution,
        } => commands::maxent(s, n, kind, emit_distribution)?,
        Command::Table { n_max } => commands::table(s, n_max)?,
        Command::Degenerate { n, mode } => commands::degenerate(s, n, mode)?,
        Command::Verify {
            n,
            max_iterations,
            step_size,
            tolerance,
            convergence_tolerance,
            seed,
            random_start,
            oracle,
            samples,
        } => {
            let config = OptimizerConfig {
                max_iterations,
                step_size,
                tolerance: convergence_tolerance,
                seed,
                random_start,
                ..OptimizerConfig::default()
            };
            let oracle_samples = oracle.then_some(samples);
            let (text, failure) = commands::verify(
                s,
                VerifyArgs {
                    n,
                    config,
                    tolerance,
                    oracle_samples,
                },
            )?;
            emit(&text)?;
            return failure.map_or(Ok(()), |f| Err(f.into()));
        }
    };
    emit(&out)
}

/// Writes one block to stdout; a closed pipe is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err:#}");
            if code == 3 {
                eprintln!("hint: raise the limit with --cap");
            }
            ExitCode::from(code)
        }
    }
}
