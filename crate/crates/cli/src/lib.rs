//! The `goodpair` command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and writes its report.
//! Exit codes: 0 on success, 1 when a bound or audit is violated, 2 on a
//! usage or runtime error.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::{execute, CliError, Runtime};
use output::{render, ExperimentConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs with explicit output and progress streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let level = if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
    match run_cli(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if cli.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let mut rt = Runtime {
        workers: cli.workers,
        cache_dir: cli.cache_dir.as_deref(),
        progress: err,
    };
    let outcome = execute(&cli.command, &mut rt)?;
    let config = ExperimentConfig {
        command: &cli.command,
        format: cli.format,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
    };
    let text = render(&config, &outcome)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    for v in &outcome.violations {
        writeln!(err, "violation: {}\n{}", v.check, v.witness)?;
    }
    Ok(if outcome.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
}
