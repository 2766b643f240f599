//! `opsw`: solve, simulate, tabulate and verify robust orienteering models.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::FileConfig;

#[derive(Parser, Debug)]
#[command(name = "opsw", version, about = "Robust orienteering with stochastic arc weights")]
struct Cli {
    /// TOML file with defaults for any flag (same key names, `-` as `_`); flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find the best first-stage path for one model and theta.
    Solve(SolveArgs),
    /// Monte-Carlo evaluation of a path under both recourse policies.
    Simulate(SimulateArgs),
    /// Theta-sweep table of robust objectives and simulated statistics.
    Table(TableArgs),
    /// Check that the static and two-stage formulations agree on every path.
    Verify(VerifyArgs),
    /// Write the MILP of a model as a CPLEX LP file per theta.
    ExportLp(ExportArgs),
    /// Turn an external solver's arc values into a stored solution record.
    ImportSolution(ImportArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Dop,
    OneStage,
    StaticSeq,
    StaticConc,
    TwoStageSeq,
    TwoStageConc,
}

impl ModelArg {
    pub fn tag(self) -> &'static str {
        match self {
            ModelArg::Dop => "dop",
            ModelArg::OneStage => "one-stage",
            ModelArg::StaticSeq => "static-seq",
            ModelArg::StaticConc => "static-conc",
            ModelArg::TwoStageSeq => "two-stage-seq",
            ModelArg::TwoStageConc => "two-stage-conc",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StdArg {
    Population,
    Sample,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Instance file: Tsiligirides text (`x y score` per line) or JSON.
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    /// Length budget, in distance units. Required for text instances.
    #[arg(long = "L", value_name = "FLOAT")]
    pub length_limit: Option<f64>,
    /// Deviation ratio: dhat = alpha * dbar, in [0, 1]. Default 0.
    #[arg(long, value_name = "FLOAT")]
    pub alpha: Option<f64>,
    /// Keep only the first COUNT nodes (depot included).
    #[arg(long, value_name = "COUNT")]
    pub nodes: Option<usize>,
    /// Seed for every random draw. Default 42.
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    /// Output directory. Default: current directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ThetaArgs {
    /// Size of the uncertainty box, in [0, 1] (fraction of dhat).
    #[arg(long, value_name = "FLOAT", conflicts_with = "theta_grid")]
    pub theta: Option<f64>,
    /// Comma-separated theta values, or `default` for 0, 0.1, ..., 1.
    #[arg(long, value_name = "LIST")]
    pub theta_grid: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Model to optimize.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Solve the static-sequential model with continuous recourse variables (same optimum).
    #[arg(long)]
    pub relax: bool,
    /// Search budget, in explored paths. Default 10000000.
    #[arg(long, value_name = "INT")]
    pub limit_nodes: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Path to simulate, e.g. `0-3-1-0`. Default: solve `--model` first.
    #[arg(long, value_name = "PATH")]
    pub path: Option<String>,
    /// Number of sampled scenarios. Default 1000.
    #[arg(long, value_name = "INT")]
    pub scenarios: Option<usize>,
    /// Standard deviation formula. Default population (divide by n).
    #[arg(long, value_enum)]
    pub std: Option<StdArg>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Number of sampled scenarios. Default 1000.
    #[arg(long, value_name = "INT")]
    pub scenarios: Option<usize>,
    /// Standard deviation formula. Default population (divide by n).
    #[arg(long, value_enum)]
    pub std: Option<StdArg>,
    /// Search budget per solve, in explored paths. Default 10000000.
    #[arg(long, value_name = "INT")]
    pub limit_nodes: Option<u64>,
    /// Directory of records written by `import-solution` to use instead of the built-in search.
    #[arg(long, value_name = "DIR")]
    pub solutions: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Largest instance accepted, in nodes (depot included). Default 8.
    #[arg(long, value_name = "COUNT")]
    pub cap: Option<usize>,
    /// Replace the static-sequential big-M (fault injection: a small value must fail).
    #[arg(long, value_name = "FLOAT")]
    pub big_m: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ExportArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Model to export.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Continuous recourse variables in the static-sequential model.
    #[arg(long)]
    pub relax: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ImportArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Model the solution belongs to.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Solver output listing `x_i_j` values (`name value`, `name = value` or XML `<variable .../>`).
    #[arg(long, value_name = "FILE")]
    pub solution: PathBuf,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Run(String),
}

impl From<opsw_core::Error> for CliError {
    fn from(e: opsw_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Solve(args) => commands::solve(args, &file),
        Command::Simulate(args) => commands::simulate(args, &file),
        Command::Table(args) => commands::table(args, &file),
        Command::Verify(args) => commands::verify(args, &file),
        Command::ExportLp(args) => commands::export_lp(args, &file),
        Command::ImportSolution(args) => commands::import_solution(args, &file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Run(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
