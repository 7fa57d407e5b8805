//! `qdm`: check states, simulate three-level dynamics, sample Jarlskog
//! states and emit the two-qubit example families.
//!
//! Exit codes: 0 success, 1 domain failure (JSON error on stdout),
//! 2 usage error or malformed input (message on stderr).

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdm_core::bloch::DEFAULT_EPS;

#[derive(Debug, Parser)]
#[command(
    name = "qdm",
    version,
    about = "Density-matrix parametrization toolkit"
)]
pub struct Cli {
    /// Tolerance for positivity verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS)]
    pub eps: f64,

    /// Seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file (CSV for `simulate`, the JSON payload otherwise).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positivity test of a Bloch vector or density matrix.
    Check(StateInput),
    /// Integrate the three-level Bloch equations.
    Simulate(SimulateArgs),
    /// Draw random density matrices from the Jarlskog parametrization.
    Sample(SampleArgs),
    /// Emit one of the two-qubit example families.
    Family(FamilyArgs),
    /// Print generators and structure constants of an su(n) basis.
    Basis(BasisArgs),
    /// Jarlskog parametrization tools.
    Jarlskog {
        #[command(subcommand)]
        action: JarlskogAction,
    },
    /// Trace invariants Tr ρᵏ and characteristic coefficients.
    Invariants(StateInput),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Ggm,
    PaperGellmann3,
    PauliTensor2q,
}

impl From<BasisArg> for qdm_core::su_basis::BasisOrdering {
    fn from(b: BasisArg) -> Self {
        use qdm_core::su_basis::BasisOrdering as O;
        match b {
            BasisArg::Ggm => O::Ggm,
            BasisArg::PaperGellmann3 => O::PaperGellMann3,
            BasisArg::PauliTensor2q => O::PauliTensor2q,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    /// Bloch vector JSON ({"n", "basis", "components"} or a bare array).
    #[arg(long = "vec")]
    pub vec: Option<PathBuf>,
    /// Density matrix JSON ({"dim", "entries"}).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateInput {
    #[command(flatten)]
    pub source: Source,
    /// Dimension, needed when --vec holds a bare array.
    #[arg(long)]
    pub n: Option<usize>,
    /// Basis of a bare-array Bloch vector.
    #[arg(long, value_enum, default_value = "ggm")]
    pub basis: BasisArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    ThreeLevel,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "three-level")]
    pub model: Model,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Ω₀(t): a number, const:V, sin, sin:AMP:FREQ or sin:AMP:FREQ:PHASE.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub omega0: String,
    /// Duration.
    #[arg(long, default_value_t = 10.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Initial Bloch vector (paper-gellmann3 components); defaults to level 1.
    #[arg(long)]
    pub init: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Sample n⊗m composite states instead, given as "n,m".
    #[arg(long)]
    pub composite: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Werner,
    WernerPt,
    Projector,
    TwoParam,
    FiveParam,
    BellDiag,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub kind: FamilyKind,
    /// Werner parameter x.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Mixing parameter p (werner-pt, two-param).
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Weights p1,p2,p3,p4 (five-param, bell-diag).
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Add the PPT separability verdict.
    #[arg(long)]
    pub ppt: bool,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "ggm")]
    pub ordering: BasisArg,
}

#[derive(Debug, Subcommand)]
pub enum JarlskogAction {
    /// Build U and ρ from a parameter file.
    Build {
        /// JarlskogParams JSON.
        #[arg(long)]
        params: PathBuf,
    },
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad flags or unreadable/malformed input.
    Usage(String),
    /// Exit 1: the input was well formed but the request is not satisfiable.
    Domain(qdm_core::Error),
}

impl From<qdm_core::Error> for CliError {
    fn from(e: qdm_core::Error) -> Self {
        CliError::Domain(e)
    }
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(payload) => {
            let text = serde_json::to_string_pretty(&payload).expect("payload serializes");
            if let (Some(path), false) = (&cli.out, matches!(cli.command, Command::Simulate(_))) {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("qdm: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(e)) => {
            let payload = serde_json::json!({
                "error": e.kind(),
                "message": e.to_string(),
            });
            emit(&serde_json::to_string_pretty(&payload).expect("payload serializes"));
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("qdm: {msg}");
            ExitCode::from(2)
        }
    }
}
