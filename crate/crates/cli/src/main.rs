//! `qwalk`: reproducible CSV artifacts for quantum walks and Gauss-sum factoring.

mod factor;
mod meet;
mod out;
mod polya;
mod walk;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::out::Csv;

#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about = "Quantum walk and Gauss-sum experiments as CSV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every randomized experiment.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// CSV destination; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-particle walks.
    #[command(subcommand)]
    Walk(walk::WalkCmd),
    /// Pólya numbers.
    #[command(subcommand)]
    Polya(polya::PolyaCmd),
    /// Two-walker meeting problem.
    #[command(subcommand)]
    Meet(meet::MeetCmd),
    /// Gauss-sum factorization.
    #[command(subcommand)]
    Factor(factor::FactorCmd),
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<qwalk::Error> for Failure {
    fn from(e: qwalk::Error) -> Self {
        use qwalk::Error::*;
        match e {
            Numeric(_) | TooFewPoints(_) | Overflow(_) | NotUnitary(_) => Failure::Numeric(e.to_string()),
            OutOfRange(_) | DimensionMismatch { .. } | ZeroVector => Failure::Usage(e.to_string()),
        }
    }
}

/// A finished command: the table and its one-line summary.
pub struct Report {
    pub csv: Csv,
    pub summary: String,
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let seed = cli.global.seed;
    let report = match cli.command {
        Command::Walk(c) => walk::run(c)?,
        Command::Polya(c) => polya::run(c)?,
        Command::Meet(c) => meet::run(c)?,
        Command::Factor(c) => factor::run(c, seed)?,
    };
    let path = cli.global.out.as_deref();
    report
        .csv
        .emit(path)
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
    if path.is_some() {
        println!("{}", report.summary);
    } else {
        eprintln!("{}", report.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
