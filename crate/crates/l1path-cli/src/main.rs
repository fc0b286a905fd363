//! Command-line surface: compute and emit regularization paths, reproduce
//! the matched-norm benchmark table on the diabetes data, run the RMSE
//! simulation study, and produce matched-budget comparison reports.
//!
//! All numeric output goes to standard output as CSV or aligned text with
//! `#`-prefixed manifest comments; errors go to standard error. Exit codes:
//! 0 ok, 2 usage, 3 data, 4 solver.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use l1path::data::StandardizeMode;
use l1path::sim::{GridKind, Scenario, StudyConfig};

mod commands;
mod fixture;
mod output;

#[derive(Parser)]
#[command(name = "l1path", version, about = "Exact lasso paths and Dantzig selector solutions", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StdMode {
    /// Centered columns with unit ℓ2 norm (matches the published table)
    L2,
    /// Centered columns with unit sample variance
    Var,
}

impl From<StdMode> for StandardizeMode {
    fn from(m: StdMode) -> Self {
        match m {
            StdMode::L2 => StandardizeMode::UnitL2Norm,
            StdMode::Var => StandardizeMode::UnitVariance,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lasso,
    Dantzig,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    NpSparse,
    NpDense,
    PnSparse,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::NpSparse => Scenario::NpSparse,
            ScenarioArg::NpDense => Scenario::NpDense,
            ScenarioArg::PnSparse => Scenario::PnSparse,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridKindArg {
    L1,
    Lambda,
}

impl From<GridKindArg> for GridKind {
    fn from(g: GridKindArg) -> Self {
        match g {
            GridKindArg::L1 => GridKind::L1Grid,
            GridKindArg::Lambda => GridKind::LambdaGrid,
        }
    }
}

/// Dataset selection shared by the data-driven commands.
#[derive(Args)]
struct DataArgs {
    /// CSV file with a header row; see --response
    #[arg(long, conflicts_with = "diabetes64")]
    data: Option<std::path::PathBuf>,
    /// Name of the response column in --data
    #[arg(long, default_value = "y")]
    response: String,
    /// Use the built-in 64-predictor quadratic diabetes design
    #[arg(long)]
    diabetes64: bool,
    /// Column standardization: l2 (unit norm) or var (unit variance)
    #[arg(long, value_enum, default_value = "l2")]
    std: StdMode,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a regularization path as CSV on standard output
    Path {
        #[command(flatten)]
        data: DataArgs,
        /// Which estimator's path to compute
        #[arg(long, value_enum, default_value = "lasso")]
        method: Method,
        /// Number of grid points for the dantzig path
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Truncate the path at this fraction of the full least-squares
        /// fit's ℓ1 norm
        #[arg(long)]
        l1_max_frac: Option<f64>,
        /// Breakpoint budget for the lasso path
        #[arg(long, default_value_t = 2000)]
        max_steps: usize,
        /// Significant digits for numeric output
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Matched-ℓ1-norm comparison table on the diabetes-64 design
    Table1 {
        /// Standardization to report; omit to report both conventions
        #[arg(long, value_enum)]
        std: Option<StdMode>,
        /// ℓ1 norm of the snapshot; the lasso breakpoint nearest this value
        /// is used and the selector is solved at that same norm
        #[arg(long, default_value_t = 1734.79)]
        s: f64,
        /// Decimal places in the table body
        #[arg(long, default_value_t = 4)]
        digits: usize,
        /// Emit CSV instead of aligned text
        #[arg(long)]
        csv: bool,
    },
    /// Replicated RMSE comparison on synthetic data, as CSV
    Simulate {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long, value_enum, default_value = "l1")]
        grid_kind: GridKindArg,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        grid_points: Option<usize>,
        /// Master seed for the replicate stream
        #[arg(long)]
        seed: Option<u64>,
        /// Seed for the fixed true coefficient vector
        #[arg(long)]
        beta_seed: Option<u64>,
        /// Override the scenario's sample count
        #[arg(long)]
        n: Option<usize>,
        /// Override the scenario's predictor count
        #[arg(long)]
        p: Option<usize>,
        /// Override the scenario's nonzero coefficient count
        #[arg(long)]
        k: Option<usize>,
        /// Override the nonzero coefficient standard deviation
        #[arg(long)]
        coef_sd: Option<f64>,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Matched-budget report: both estimators at the same ℓ1 norm
    Compare {
        #[command(flatten)]
        data: DataArgs,
        /// The shared ℓ1 budget
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
}

/// Errors mapped to process exit codes.
pub enum CliError {
    Usage(String),
    Data(String),
    Solver(String),
}

impl CliError {
    fn exit(&self) -> ExitCode {
        let (code, msg) = match self {
            CliError::Usage(m) => (2, m),
            CliError::Data(m) => (3, m),
            CliError::Solver(m) => (4, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

impl From<l1path::data::DataError> for CliError {
    fn from(e: l1path::data::DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<l1path::lars::LarsError> for CliError {
    fn from(e: l1path::lars::LarsError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<l1path::dantzig::DsError> for CliError {
    fn from(e: l1path::dantzig::DsError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<l1path::sim::SimError> for CliError {
    fn from(e: l1path::sim::SimError) -> Self {
        CliError::Solver(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Path {
            data,
            method,
            grid,
            l1_max_frac,
            max_steps,
            digits,
        } => commands::cmd_path(&data, method, grid, l1_max_frac, max_steps, digits),
        Command::Table1 { std, s, digits, csv } => commands::cmd_table1(std, s, digits, csv),
        Command::Simulate {
            scenario,
            grid_kind,
            reps,
            grid_points,
            seed,
            beta_seed,
            n,
            p,
            k,
            coef_sd,
            digits,
        } => {
            let mut cfg = StudyConfig::preset(scenario.into());
            cfg.grid_kind = grid_kind.into();
            if let Some(v) = reps {
                cfg.reps = v;
            }
            if let Some(v) = grid_points {
                cfg.grid_points = v;
            }
            if let Some(v) = seed {
                cfg.master_seed = v;
            }
            if let Some(v) = beta_seed {
                cfg.beta_seed = v;
            }
            if let Some(v) = n {
                cfg.n = v;
            }
            if let Some(v) = p {
                cfg.p = v;
            }
            if let Some(v) = k {
                cfg.k_nonzero = v;
            }
            if let Some(v) = coef_sd {
                cfg.coef_sd = v;
            }
            commands::cmd_simulate(&cfg, digits)
        }
        Command::Compare { data, s, digits } => commands::cmd_compare(&data, s, digits),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.exit(),
    }
}
