//! `shotnoise`: batch reports for option and bond pricing under shot-noise dynamics.
//!
//! Exit status is 0 on success, 1 when a numerical check misses its tolerance or a
//! computation fails, and 2 for configuration or usage errors.

mod commands;
mod config;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use shotnoise::{Backend, PricingError};

use crate::commands::Command;
use crate::config::{ConfigError, Format, Overrides, RunConfig};
use crate::report::Header;

#[derive(Debug, Parser)]
#[command(name = "shotnoise", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    paths: Option<u64>,
    #[arg(long, global = true, value_parser = parse_backend)]
    backend: Option<Backend>,
    /// Report destination; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative tolerance of the series and quadrature routines.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse::<Backend>().map_err(|e| e.to_string())
}

fn resolve(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let overrides = Overrides {
        seed: cli.seed,
        paths: cli.paths,
        backend: cli.backend,
        out: cli.out.clone(),
        format: cli.format,
        tol: cli.tol,
    };
    RunConfig::load(cli.config.as_deref())?.apply(overrides)
}

fn write_report(cfg: &RunConfig, command: Command, outcome: &commands::Outcome) -> Result<()> {
    let header = Header { command: command.name(), config: cfg.echo() };
    let mut sink: Box<dyn Write> = match &cfg.output.path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report::render(&mut sink, cfg.output.format, &header, &outcome.table)?;
    sink.flush()?;
    Ok(())
}

fn is_usage_error(err: &anyhow::Error) -> bool {
    matches!(
        err.downcast_ref::<PricingError>(),
        Some(PricingError::InvalidParameter { .. } | PricingError::DegenerateMaturity)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match commands::execute(cli.command, &cfg) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if is_usage_error(&e) { 2 } else { 1 });
        }
    };
    if let Err(e) = write_report(&cfg, cli.command, &outcome) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for failure in &outcome.failures {
            eprintln!("FAIL {failure}");
        }
        ExitCode::from(1)
    }
}
