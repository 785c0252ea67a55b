mod commands;
mod config;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use thiserror::Error;

use config::{Command, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Compute(_) | CliError::Io(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Compute(_) => "computation",
            CliError::Io(_) => "io",
        }
    }
}

/// Harmonic-polynomial and degenerate-equation analyses.
#[derive(Parser, Debug)]
#[command(name = "nodal-kit", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print errors to stderr as JSON.
    #[arg(long, global = true)]
    error_json: bool,
    #[command(flatten)]
    options: RunConfig,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(text) = std::env::var("NODALKIT_THREADS") {
        let n: usize = text
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("NODALKIT_THREADS: '{text}' is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("NODALKIT_THREADS: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut config = base.overlay(cli.options);
    if cli.command != Command::Run {
        config.command = Some(cli.command.name());
    }
    let command = config.command()?;
    config.validate()?;
    let output = commands::dispatch(command, &config)?;
    report::emit(&config, &output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let error_json = cli.error_json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if error_json {
                eprintln!("{}", json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
            } else {
                eprintln!("nodal-kit: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
