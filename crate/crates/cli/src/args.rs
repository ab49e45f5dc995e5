use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet::arith::ScalarMode;
use dirichlet::group::UnresolvedPolicy;

#[derive(Debug, Parser)]
#[command(
    name = "dirichlet",
    version,
    about = "Truncated Dirichlet series: algebra, Bohr lifts, invariants and analysis"
)]
pub struct Cli {
    /// Worker threads for grid evaluations (1 disables parallel evaluation).
    #[arg(long, global = true, value_name = "N")]
    pub parallel: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a series file.
    Build(BuildArgs),
    /// Apply an operation to series or polynomial files.
    Op(OpArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Run an analysis and emit a report.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

impl From<Mode> for ScalarMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => ScalarMode::Exact,
            Mode::Float => ScalarMode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Error,
    #[value(name = "zero_unresolved", alias = "zero-unresolved", alias = "zero")]
    ZeroUnresolved,
}

impl From<Policy> for UnresolvedPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Error => UnresolvedPolicy::Error,
            Policy::ZeroUnresolved => UnresolvedPolicy::ZeroUnresolved,
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// `zeta`, `unit`, `monomial <n> <c>`, `random` or `file <path>`.
    #[arg(required = true, num_args = 1..=3, value_name = "EXPR")]
    pub expr: Vec<String>,
    #[arg(long, default_value_t = 32)]
    pub window: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Seed for `random`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability that each index is in the support, for `random`.
    #[arg(long, default_value_t = 0.2)]
    pub density: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpName {
    Add,
    Mul,
    Invert,
    Dilate,
    Lift,
    Drop,
    Act,
    Project,
    Restrict,
    Average,
}

#[derive(Debug, Args)]
pub struct OpArgs {
    #[arg(value_enum)]
    pub name: OpName,
    /// Input files: two for `add` and `mul`, one otherwise.
    #[arg(required = true, num_args = 1..=2)]
    pub inputs: Vec<PathBuf>,
    /// Dilation factor `re` or `re,im` (`p/q` parts in exact mode).
    #[arg(long)]
    pub r: Option<String>,
    /// Group generators in cycle notation, or `shift(k)`; repeatable.
    #[arg(long = "gens", value_name = "PERM")]
    pub gens: Vec<String>,
    #[arg(long, value_enum, default_value_t = Policy::Error)]
    pub policy: Policy,
    /// Prime indices kept by `restrict`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub set: Vec<usize>,
    /// Window for `drop` (default: largest integer of a monomial).
    #[arg(long)]
    pub window: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, required_unless_present_any = ["replay", "list"])]
    pub suite: Option<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Trials per property (default: the suite's own).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Re-run the failures recorded in a suite result file.
    #[arg(long, conflicts_with = "suite")]
    pub replay: Option<PathBuf>,
    /// List suites and their properties.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalyzeKind {
    TorusSup,
    SeminormProfile,
    Perron,
    LineSup,
    SigmaU,
    Coefficient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(value_enum)]
    pub kind: AnalyzeKind,
    /// Series file (or polynomial file for `torus-sup`).
    pub input: PathBuf,
    /// Radius in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Radius grid `a:b:k` (k equispaced points from a to b).
    #[arg(long = "r-grid", default_value = "0.1:0.9:17")]
    pub r_grid: String,
    /// Torus grid points per variable, or the quadrature grid for `coefficient`.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Torus search restarts, or refined peaks for `line-sup`.
    #[arg(long)]
    pub refine: Option<usize>,
    /// Torus search seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Half-length of the t-window for line sups.
    #[arg(long = "T", default_value_t = 1e4)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Backend for `sigma-u`: `torus` or `line`.
    #[arg(long, default_value = "torus")]
    pub method: String,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    /// Half-length of the Perron integration window.
    #[arg(long = "R", default_value_t = 2000.0)]
    pub r_half: f64,
    /// Trapezoid steps for `perron` (default 100 per unit of R).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output format (default: csv for `seminorm-profile`, json otherwise).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
