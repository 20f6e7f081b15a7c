//! `msle` binary: parse, dispatch, map outcomes to exit codes
//! (0 success, 1 acceptance failure, 2 environment/I-O, 64 usage).

mod config;
mod runner;
mod summary;

use clap::Parser;

use config::{Cli, EXIT_CRITERION_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE};
use runner::RunError;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let config = match config::resolve(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(EXIT_USAGE);
        }
    };
    match runner::run(&config) {
        Ok(summary) => {
            for c in &summary.criteria {
                println!(
                    "[{}] {}: value {:.6e} vs threshold {:.6e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                );
            }
            println!(
                "{}: {} criteria, {:.2} s, artifacts in {}",
                config.subcommand,
                summary.criteria.len(),
                summary.elapsed_seconds,
                config.output.display()
            );
            std::process::exit(if summary.all_pass() {
                EXIT_OK
            } else {
                EXIT_CRITERION_FAILED
            });
        }
        Err(RunError::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            std::process::exit(EXIT_IO);
        }
        Err(RunError::Compute(msg)) => {
            eprintln!("computation error: {msg}");
            std::process::exit(EXIT_IO);
        }
    }
}
