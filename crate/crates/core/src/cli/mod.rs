//! Scenario runner behind the `leggett` binary.
//!
//! A run reads a [`ScenarioConfig`], dispatches to the engines, writes a JSON
//! report (and a CSV table for sweeps), and maps the outcome to an exit code:
//! 0 when every check is satisfied, 1 when a violation is found, 2 for
//! invalid input.

pub mod config;
pub mod report;
pub mod runner;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{ScenarioConfig, ScenarioKind};
pub use report::{validate_report, TABLE_HEADER};
pub use runner::{evaluate, run_scenario, run_sweep, RunOutcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Engine(#[from] crate::error::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Satisfied = 0,
    Violated = 1,
    Invalid = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_verdict(satisfied: bool) -> Self {
        if satisfied {
            ExitStatus::Satisfied
        } else {
            ExitStatus::Violated
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "leggett", version, about = "Check the basic Leggett inequalities on joint distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an explicit joint distribution exactly.
    Check(RunArgs),
    /// Replay the derivation step by step on an explicit distribution.
    Trace(RunArgs),
    /// Check the Born-rule distribution of a two-qubit state.
    Quantum(RunArgs),
    /// Evaluate a quantum or mixed scenario over a range of angles.
    Sweep(RunArgs),
    /// Combine Malus-law marginals with a quantum correlator.
    Mixed(RunArgs),
    /// Sample trials and check the empirical frequencies.
    Mc(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario file (JSON, schema 1).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; overrides output.report.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sweep table path; overrides output.table.
    #[arg(long)]
    table: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (ScenarioKind, RunArgs) {
        match self {
            Command::Check(a) => (ScenarioKind::Check, a),
            Command::Trace(a) => (ScenarioKind::Trace, a),
            Command::Quantum(a) => (ScenarioKind::Quantum, a),
            Command::Sweep(a) => (ScenarioKind::Sweep, a),
            Command::Mixed(a) => (ScenarioKind::Mixed, a),
            Command::Mc(a) => (ScenarioKind::Mc, a),
        }
    }
}

fn load_config(scenario: ScenarioKind, args: RunArgs) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io { path: args.config.clone(), source })?;
    let mut config = ScenarioConfig::from_json(&text)?;
    match config.scenario {
        Some(declared) if declared != scenario => {
            return Err(CliError::Config(format!(
                "config declares scenario {declared} but subcommand {scenario} was given"
            )))
        }
        _ => config.scenario = Some(scenario),
    }
    if args.seed.is_some() {
        config.seed = args.seed;
    }
    if args.output.is_some() {
        config.output.report = args.output;
    }
    if args.table.is_some() {
        config.output.table = args.table;
    }
    Ok(config)
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::Invalid.code() } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let (scenario, args) = cli.command.split();
    let result = load_config(scenario, args).and_then(|config| run_scenario(&config));
    match result {
        Ok(outcome) => {
            if outcome.report_path.is_none() {
                let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
                let _ = writeln!(stdout, "{text}");
            }
            if outcome.status == ExitStatus::Violated {
                let _ = writeln!(stderr, "violation found (provenance: {})", outcome.report["provenance"]);
            }
            outcome.status.code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitStatus::Invalid.code()
        }
    }
}
