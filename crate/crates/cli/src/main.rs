//! `saddlepoint`: run the builtin examples, expand user-defined saddle
//! problems from a file, and self-test the library.
//!
//! Exit status: 0 on success, 1 when a check or `--tol` threshold fails,
//! 2 on invalid input.

mod commands;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::rational::Rational64;

use commands::{CliError, ExampleFlags};
use output::Format;

#[derive(Parser)]
#[command(name = "saddlepoint", version, about = "Saddle-point asymptotic expansions with a quadrature oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Fail (exit 1) when expansion and quadrature differ by more than this relative amount.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the integral described by a problem file.
    Expand {
        file: PathBuf,
        /// Values of N to compare at, overriding the file.
        #[arg(long, num_args = 1..)]
        n: Vec<f64>,
        /// Number of expansion terms, overriding the file's `order`.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Run a builtin example: gamma, kepler, center, parabolic or sylvester.
    Example {
        name: String,
        #[arg(long)]
        n: Option<f64>,
        /// Eccentricity in (0, 1), for `center`.
        #[arg(long)]
        eps: Option<f64>,
        /// Rational such as 1 or 3/2, for `sylvester`.
        #[arg(long)]
        lambda: Option<Rational64>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Expand { file, n, terms } => std::fs::read_to_string(file)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))
            .and_then(|text| commands::expand(&text, n, *terms, cli.tol)),
        Command::Example {
            name,
            n,
            eps,
            lambda,
            terms,
        } => commands::example(
            name,
            ExampleFlags {
                n: *n,
                eps: *eps,
                lambda: *lambda,
                terms: *terms,
            },
            cli.tol,
        ),
        Command::Selftest { inject_fault } => commands::selftest(inject_fault.as_deref()),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report.render(cli.format));
            match outcome.failure {
                Some(msg) if !outcome.ok => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
