//! Command-line surface for `hopfchain`: flag parsing, the computation
//! subcommands and the acceptance suite behind `verify`.

pub mod commands;
pub mod config;
pub mod stats;
pub mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hopfchain::exactmath::{parse_rational, Rational};

pub use config::{Format, RunConfig, Space};

/// Version of every JSON document this tool writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hopfchain::Error),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(hopfchain::Error::Verification(_)) | CliError::Verification(_) => "verification",
            CliError::Core(_) => "parameter",
            CliError::Io(_) => "io",
        }
    }

    /// 1 for a failed verification, 2 for anything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        if self.kind() == "verification" {
            1
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format_version": FORMAT_VERSION,
            "error": { "kind": self.kind(), "message": self.to_string() },
        })
    }
}

pub(crate) fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "hopfchain", version, about = "Markov chains from descent operators on combinatorial Hopf algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact transition matrix.
    Matrix(MatrixArgs),
    /// Eigenvalues and multiplicities from the formula, optionally checked against the matrix.
    Spectrum(SpectrumArgs),
    /// Stationary distributions, checked against the matrix when an operator is given.
    Stationary(StationaryArgs),
    /// Eigenvectors of top-or-bottom-to-random on the free associative algebra.
    Eigvecs(EigvecsArgs),
    /// Exact expectations of statistics over time.
    Evolve(EvolveArgs),
    /// Monte Carlo trajectories.
    Simulate(SimulateArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Confirm eigenspace dimensions and diagonalisability on the built matrix.
    #[arg(long)]
    pub verify_matrix: bool,
}

#[derive(Args, Debug)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug)]
pub struct EigvecsArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Only the set E_j (default: every j).
    #[arg(long)]
    pub j: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct StatArgs {
    /// Number of steps.
    #[arg(long, default_value_t = 5)]
    pub t: usize,
    /// Statistic(s): weighted-descents, weighted-peaks, descents, peaks; f<j> on forests.
    #[arg(long = "stat", num_args = 1..)]
    pub stats: Vec<String>,
    /// Weight parameter of weighted-descents and weighted-peaks.
    #[arg(long, value_parser = rational_arg)]
    pub stat_q: Option<Rational>,
    /// Starting state (default: the ascending deck, or --forest).
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(flatten)]
    pub stat: StatArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerKind {
    /// Cut and riffle the deck (shuffle algebra only).
    Gsr,
    /// Sample the built transition matrix row by row.
    Rows,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(flatten)]
    pub stat: StatArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub sampler: Option<SamplerKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Desk,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "desk")]
    pub grid: Grid,
    /// Run only these criteria (1-10).
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub only: Vec<u32>,
    /// Emit JSON instead of the table.
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long)]
    pub serial: bool,
}

/// Rendered command output and whether every check it ran passed.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    pub fn json(value: &Value, passed: bool) -> Output {
        let text = serde_json::to_string_pretty(value).expect("JSON values serialise");
        Output { text: text + "\n", passed }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Matrix(a) => commands::matrix(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Stationary(a) => commands::stationary(a),
        Command::Eigvecs(a) => commands::eigvecs(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Verify(a) => commands::verify(a),
    }
}

/// Where the output of a command goes.
pub fn out_path(cli: &Cli) -> Option<&std::path::Path> {
    match &cli.command {
        Command::Matrix(a) => a.run.out.as_deref(),
        Command::Spectrum(a) => a.run.out.as_deref(),
        Command::Stationary(a) => a.run.out.as_deref(),
        Command::Eigvecs(a) => a.run.out.as_deref(),
        Command::Evolve(a) => a.run.out.as_deref(),
        Command::Simulate(a) => a.run.out.as_deref(),
        Command::Verify(a) => a.out.as_deref(),
    }
}
