//! `codimlab`: reproducible experiments on word-defined algebras.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use codimlab_core::codim::Mode;
use codimlab_core::Error;

use config::{FileConfig, ModelArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Invariant(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => 3,
            CliError::Core(Error::InvariantViolation(_)) | CliError::Invariant(_) => 4,
            CliError::Core(_) | CliError::Input(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Input(_) => "InvalidInput",
            CliError::Invariant(_) => "InvariantViolation",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Input(m) | CliError::Invariant(m) => m.clone(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "codimlab", version, about = "Codimension experiments for word-defined nonassociative algebras")]
pub struct Cli {
    /// JSON file with default values for any option
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true, env = "CODIMLAB_THREADS")]
    pub threads: Option<usize>,
    /// Seed for randomized checks, recorded in every output
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Primes for rank computations, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Working precision in bits for real quantities
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Write the CSV here instead of stdout
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Also write a JSON report here
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factor complexity, balance and height deviation of a word
    Words {
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Structural checks on a model
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Codimensions c_1..c_n
    Codim {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        mode: Option<Mode>,
        /// Also compute multiplicities and colengths
        #[arg(long)]
        cocharacter: bool,
    },
    /// Cocharacter multiplicities in one degree
    Cocharacter {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Build and evaluate the alternating witness polynomial
    Witness {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: Option<usize>,
        /// Write the expanded polynomial as JSON
        #[arg(long)]
        polynomial: Option<PathBuf>,
    },
    /// Evaluate Φ at a point, a partition, or the balanced section Φ_d
    Phi {
        /// Comma-separated coordinates summing to 1
        #[arg(long, conflicts_with_all = ["partition", "gamma"])]
        point: Option<String>,
        #[arg(long, conflicts_with = "gamma")]
        partition: Option<String>,
        #[arg(long, requires = "d")]
        gamma: Option<String>,
        #[arg(long)]
        d: Option<u32>,
    },
    /// Numerical checks of the dimension, push-down and added-row lemmas
    LemmaCheck {
        lemma: Lemma,
        /// Degree for L1
        #[arg(long)]
        n: Option<usize>,
        /// Height bound for L1
        #[arg(long)]
        h: Option<usize>,
        /// Number of random moves for L2
        #[arg(long)]
        moves: Option<usize>,
        /// Value of Φ for L3
        #[arg(long)]
        a: Option<String>,
    },
    /// Codimensions next to witness lower bounds, upper bounds and targets
    Trajectory {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Parameters whose unital exponent approximates each γ
    Scan {
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<String>>,
        #[arg(long)]
        eps: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraAction {
    /// Verify x(yz) = 0 and that the Z-span is a null ideal
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// Degree the window is built for
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    L1,
    L2,
    L3,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    if let Some(t) = cli.threads.or(file.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    commands::dispatch(&cli, &file)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.message() });
            eprintln!("{body}");
            ExitCode::from(e.exit_code())
        }
    }
}
