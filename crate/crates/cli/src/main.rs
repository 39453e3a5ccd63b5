//! `heliosense`: config-driven front end to the simulator.
//!
//! Exit codes: 0 success, 1 physics or consistency failure, 2 configuration error.

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heliosense_core::Error as CoreError;

use crate::commands::Context;
use crate::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "heliosense",
    version,
    about = "Spin-echo mm-wave sensing with electrons on helium"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form parameter chain with its provenance table.
    DeriveParams(Common),
    /// Vertical-motion spectrum, dipoles and Stark scan.
    SolveHydrogen(Common),
    /// Electrostatics of one trap cell and its quadrupole fit.
    SolveTrap(Common),
    /// Analytic, numeric and Monte Carlo spin echo.
    SimulateEcho(Common),
    /// Minimal detectable field versus signal duration.
    Sensitivity(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Print a JSON summary on stdout instead of text.
    #[arg(long)]
    json: bool,
    /// Override the noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo shot count; 0 runs the analytic echo only.
    #[arg(long)]
    shots: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(CoreError),
    Consistency(String),
    Io(String),
}

impl CliError {
    pub fn io(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
        move |e| CliError::Io(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        // errors that can only come from bad inputs are configuration errors
        match e {
            CoreError::InvalidParameter { .. }
            | CoreError::InvalidSchedule(_)
            | CoreError::InvalidPotential(_)
            | CoreError::Resolution(_) => CliError::Config(e.to_string()),
            other => CliError::Physics(other),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Physics(e) => write!(f, "{e}"),
            CliError::Consistency(m) => write!(f, "consistency check failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, which) = match cli.command {
        Command::DeriveParams(c) => (c, 0),
        Command::SolveHydrogen(c) => (c, 1),
        Command::SolveTrap(c) => (c, 2),
        Command::SimulateEcho(c) => (c, 3),
        Command::Sensitivity(c) => (c, 4),
    };
    let cfg = RunConfig::load(&common.config)?;
    let out_dir = common.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let ctx = Context {
        cfg,
        json: common.json,
        out_dir,
    };
    match which {
        0 => commands::derive_params(&ctx),
        1 => commands::solve_hydrogen(&ctx),
        2 => commands::solve_trap(&ctx),
        3 => commands::simulate_echo(&ctx, common.seed, common.shots),
        _ => commands::sensitivity(&ctx),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heliosense: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
