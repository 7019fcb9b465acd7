//! `qcap`: capacities, sweeps and ellipsoid point clouds for qubit channels.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcap_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "qcap",
    version,
    about = "Product-state capacity of qubit channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity of one channel, or of a periodic / convex memory channel.
    Capacity(CapacityArgs),
    /// Capacity and χ(½) over a parameter range.
    Sweep(SweepArgs),
    /// Input and output Bloch vectors on a Fibonacci sphere.
    Ellipsoid(EllipsoidArgs),
    /// Multi-start search over pure-state ensembles.
    Oracle(OracleArgs),
    /// Periodic memory channel over the given branches.
    Periodic(BranchArgs),
    /// Convex combination of the given branches.
    Convex(ConvexArgs),
    /// Periodic capacity against the average of branch capacities.
    Interchange(BranchArgs),
}

#[derive(Debug, Clone, Args)]
struct ChannelArgs {
    /// Channel family (ad, gad, dep, identity).
    #[arg(long, default_value = "ad")]
    channel: String,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
}

impl ChannelArgs {
    fn lookup(&self, name: &str) -> Option<f64> {
        match name {
            "gamma" => self.gamma,
            "lambda" => self.lambda,
            "p" => self.p,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Branch specs of a periodic channel, e.g. `ad:0.2 ad:0.6`.
    #[arg(long, num_args = 1.., conflicts_with = "convex")]
    periodic: Option<Vec<String>>,
    /// Branch specs of a convex combination.
    #[arg(long, num_args = 1..)]
    convex: Option<Vec<String>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Vary {
    Gamma,
    Lambda,
    P,
    A,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Swept variable.
    #[arg(long, value_enum, default_value = "gamma")]
    vary: Vary,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 1.0)]
    to: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EllipsoidArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Number of sphere points.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BranchArgs {
    /// Branch specs `family:param[:param]`.
    #[arg(required = true)]
    branches: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ConvexArgs {
    #[command(flatten)]
    branches: BranchArgs,
    /// Mixing probabilities; recorded but not used by the capacity.
    #[arg(long, num_args = 1..)]
    weights: Option<Vec<f64>>,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numeric(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qcap: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
