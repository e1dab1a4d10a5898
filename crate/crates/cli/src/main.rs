//! `hv`: evaluate the special functions, apply the operators and run the
//! verification suites, writing JSON or CSV reports.

mod args;
mod commands;
mod error;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Format};
use crate::error::{CliError, CliResult};
use crate::report::{Report, Row};

/// Exit status of a verification whose check did not hold.
const CHECK_FAILED: u8 = 4;

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("HV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("HV_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn emit(cli: &Cli) -> CliResult<Option<bool>> {
    configure_threads()?;
    let outcome = commands::run(cli)?;
    let report = Report { config: &outcome.config, rows: &outcome.rows, summary: &outcome.summary };
    let bytes = match cli.common.format {
        Format::Json => report::to_json(&report, true),
        Format::Csv => report::to_csv(&report),
    };
    match &cli.common.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        None => std::io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    Ok(outcome.passed)
}

fn error_record(kind: &str, message: &str, command: Option<&str>) -> Vec<u8> {
    let mut inner = Row::new().text("kind", kind).text("message", message);
    if let Some(c) = command {
        inner = inner.text("command", c);
    }
    let mut out = b"{\"error\":".to_vec();
    out.extend(report::to_json(&inner, false));
    out.pop();
    out.extend_from_slice(b"}\n");
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.render().to_string();
            let first = detail.lines().next().unwrap_or_default();
            let message = first.strip_prefix("error: ").unwrap_or(first);
            let _ = std::io::stderr().write_all(&error_record("ConfigError", message, None));
            return ExitCode::from(2);
        }
    };
    match emit(&cli) {
        Ok(Some(false)) => ExitCode::from(CHECK_FAILED),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = std::io::stderr().write_all(&error_record(e.kind(), &e.to_string(), Some(cli.command.name())));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
