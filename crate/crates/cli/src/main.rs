//! `irreality-lab`: measures for user-supplied states, figure sweeps and
//! invariant verification.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 acceptance threshold
//! violated, 3 numerical failure.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use irreality_core::experiments::ExperimentId;
use irreality_core::{BellSign, Error};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_ACCEPTANCE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "irreality-lab",
    version,
    about = "Joint irreality numerics and figure sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the measure report for a state and one or two observables.
    Measure(MeasureArgs),
    /// Qubit irreality against its empirical bounds.
    Fig1(ExperimentArgs),
    /// Werner joint irreality over (alpha, theta).
    Fig2(ExperimentArgs),
    /// Werner joint irreality per unit information.
    Fig3(ExperimentArgs),
    /// Werner joint irreality against correlation measures.
    Fig4(ExperimentArgs),
    /// Exponent fit for qubit irreality.
    MuFit(ExperimentArgs),
    /// Invariant suites over random inputs.
    Verify(ExperimentArgs),
    /// Unrevealed classical measurement versus the quantum dephasing map.
    ClassicalDemo(ClassicalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogBase {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

impl From<Sign> for BellSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => BellSign::Plus,
            Sign::Minus => BellSign::Minus,
        }
    }
}

/// `--samples` value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Samples {
    Default,
    Paper,
    Count(usize),
}

impl FromStr for Samples {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(Samples::Default),
            "paper" => Ok(Samples::Paper),
            _ => match s.parse::<usize>() {
                Ok(0) => Err("sample count must be positive".into()),
                Ok(n) => Ok(Samples::Count(n)),
                Err(_) => Err(format!(
                    "expected a positive integer, 'default' or 'paper', got '{s}'"
                )),
            },
        }
    }
}

impl Samples {
    pub fn resolve(self, id: ExperimentId) -> usize {
        match self {
            Samples::Default => id.default_samples(),
            Samples::Paper => id.paper_samples(),
            Samples::Count(n) => n,
        }
    }
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// State document (JSON).
    #[arg(long)]
    pub state: PathBuf,
    /// First observable document (JSON).
    #[arg(long = "x")]
    pub x: PathBuf,
    /// Optional second observable document (JSON).
    #[arg(long = "y")]
    pub y: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Display unit: bits (2) or nats (e).
    #[arg(long, value_enum, default_value = "2")]
    pub log_base: LogBase,
    /// Also write the full-precision report (JSON, bits) to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Sample count: a positive integer, `default` or `paper`.
    #[arg(long, default_value = "default")]
    pub samples: Samples,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Override the closed-form vs matrix agreement tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "minus")]
    pub werner_sign: Sign,
    /// Summary format on stdout.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads (capped by IRREALITY_LAB_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
    /// theta grid points for fig2 and fig3.
    #[arg(long)]
    pub theta_points: Option<usize>,
    /// fig4: run the discord optimizer on every k-th sample.
    #[arg(long)]
    pub spot_check_every: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    #[arg(long, default_value_t = 32)]
    pub nq: usize,
    #[arg(long, default_value_t = 32)]
    pub np: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Measure(a) => commands::measure(&a),
        Command::Fig1(a) => commands::experiment(ExperimentId::Fig1, &a),
        Command::Fig2(a) => commands::experiment(ExperimentId::Fig2, &a),
        Command::Fig3(a) => commands::experiment(ExperimentId::Fig3, &a),
        Command::Fig4(a) => commands::experiment(ExperimentId::Fig4, &a),
        Command::MuFit(a) => commands::experiment(ExperimentId::MuFit, &a),
        Command::Verify(a) => commands::experiment(ExperimentId::Verify, &a),
        Command::ClassicalDemo(a) => commands::classical_demo(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
