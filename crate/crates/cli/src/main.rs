//! `qtree`: evaluate tree bases, assemble Gram and connection matrices, and
//! run the exact verification suites. Output is JSON with rationals as
//! `"p/q"` strings.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 configuration error,
//! 3 arithmetic error, 4 target not reachable by right-to-left moves.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtree_core::QError;

#[derive(Parser, Debug)]
#[command(
    name = "qtree",
    version,
    about = "Exact multidimensional q-Hahn and q-Racah polynomials on planar trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Values of Q_c for one tree and labeling.
    Eval(EvalArgs),
    /// Every basis function of degree n (or all degrees) on [h;N].
    Basis(BasisArgs),
    /// Gram matrix of a tree basis, with orthogonality and norm checks.
    Gram(GramArgs),
    /// Connection coefficients between two tree bases.
    Connect(ConnectArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// s = q^(1/2), a rational in (0,1).
    #[arg(long = "sqrt-q", default_value = "1/2")]
    pub sqrt_q: String,
    /// Comma-separated α_1,…,α_h (extra entries are ignored).
    #[arg(long, default_value = "1/2,1/3,2/3,3/5,4/7", value_delimiter = ',')]
    pub alphas: Vec<String>,
    /// Skip the parameter regime check.
    #[arg(long)]
    pub allow_any_params: bool,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub tree: String,
    /// Coefficient labeling in pre-order, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub labels: Vec<usize>,
    #[arg(long = "N")]
    pub big_n: usize,
    /// Evaluate at every point of [h;N].
    #[arg(long, conflicts_with = "point")]
    pub all: bool,
    /// A point x_1,…,x_h; may be repeated.
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append)]
    pub point: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub tree: String,
    #[arg(long = "N")]
    pub big_n: usize,
    /// Only degree n; all degrees when omitted.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GramArgs {
    #[command(flatten)]
    pub common: Common,
    /// May be repeated; one report per tree.
    #[arg(long, required = true)]
    pub tree: Vec<String>,
    #[arg(long = "N")]
    pub big_n: usize,
}

#[derive(Args, Debug)]
pub struct ConnectArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
    #[arg(long)]
    pub n: usize,
    /// Use the inner-product route only (works for any pair of trees).
    #[arg(long)]
    pub oracle_only: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Suite name; may be repeated. See `qtree verify --list`.
    #[arg(long, default_value = "all")]
    pub suite: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub h: usize,
    #[arg(long = "N", default_value_t = 3)]
    pub big_n: usize,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the suite names and exit.
    #[arg(long)]
    pub list: bool,
}

/// Command failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Core(QError),
    Io(std::io::Error),
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Core(e) => match e {
                QError::ZeroDenominator(_) | QError::NonSquareRadicand(_) => 3,
                QError::NotRightReachable => 4,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

/// The JSON document and whether every check it reports passed.
pub struct Output {
    pub json: serde_json::Value,
    pub passed: bool,
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("QTREE_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            Failure::Config(format!(
                "QTREE_THREADS must be a positive integer, got '{v}'"
            ))
        })?;
        if n == 0 {
            return Err(Failure::Config("QTREE_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    Ok(())
}

fn emit(out: &Output, path: Option<&PathBuf>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&out.json).expect("JSON serializes");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let (out, path) = match cli.command {
        Command::Eval(a) => (commands::eval(&a)?, a.common.out),
        Command::Basis(a) => (commands::basis(&a)?, a.common.out),
        Command::Gram(a) => (commands::gram(&a)?, a.common.out),
        Command::Connect(a) => (commands::connect(&a)?, a.common.out),
        Command::Verify(a) => (commands::verify(&a)?, a.common.out),
    };
    emit(&out, path.as_ref())?;
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("qtree: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
