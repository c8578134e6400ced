//! `ahext`: asymptotically hyperbolic extensions of Bartnik data from the
//! command line.
//!
//! Exit codes: 0 success (or a PASS report), 2 invalid input, 3 a violated
//! hypothesis, 4 numerical non-certification.

mod commands;
mod error;
mod input;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use ahext_core::ExtensionVariant;
use clap::{Args, Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ahext", version, about = "Asymptotically hyperbolic extensions of Bartnik data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the AdS-Schwarzschild profile u(s) with u(0) = r0.
    Profile(ProfileArgs),
    /// Flow the boundary metric to a round one and tabulate the path.
    Flow(FlowArgs),
    /// Build a collar and tabulate its levels.
    Collar(CollarArgs),
    /// Build the full extension: profile CSV plus certification report.
    Extend(ExtendArgs),
    /// Print the Bartnik-mass upper bound of a variant.
    Bound(BoundArgs),
    /// Re-derive the profile certificates of an `extend` run.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long, allow_hyphen_values = true)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long)]
    r0: f64,
    #[arg(long, default_value_t = 2.0)]
    smax: f64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Bartnik data JSON.
    #[arg(long)]
    input: PathBuf,
    /// Gauss-Legendre nodes of the surface grid.
    #[arg(long, default_value_t = 48)]
    nodes: usize,
}

#[derive(Debug, Args)]
struct PathArgs {
    /// Path parameter after which the metric is round.
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    /// Samples of the path parameter.
    #[arg(long = "path-samples", default_value_t = 161)]
    path_samples: usize,
}

#[derive(Debug, Args)]
struct CollarOptions {
    #[arg(long, default_value = "auto")]
    variant: ExtensionVariant,
    /// Bulge parameter of the minimal collar.
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    /// Model mass of the CMC collars.
    #[arg(long = "cmc-mass", default_value_t = -1e3, allow_hyphen_values = true)]
    cmc_mass: f64,
    /// Coupling of the b > 0 collar; the default rule when omitted.
    #[arg(long)]
    coupling: Option<f64>,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    path: PathArgs,
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON summary destination.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CollarArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    collar: CollarOptions,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExtendArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    collar: CollarOptions,
    /// Mass of the AdS-Schwarzschild end.
    #[arg(long, allow_hyphen_values = true)]
    mass: f64,
    /// Samples of the round part of the collar.
    #[arg(long = "profile-samples", default_value_t = 257)]
    profile_samples: usize,
    #[arg(long, default_value = "profile.csv")]
    output: PathBuf,
    #[arg(long, default_value = "report.json")]
    report: PathBuf,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    path: PathArgs,
    #[arg(long, default_value = "auto")]
    variant: ExtensionVariant,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    report: PathBuf,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("AHEXT_THREADS") else {
        return Ok(());
    };
    let threads = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Schema(format!("AHEXT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Schema(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Profile(a) => commands::profile(&a),
        Command::Flow(a) => commands::flow(&a),
        Command::Collar(a) => commands::collar(&a),
        Command::Extend(a) => commands::extend(&a),
        Command::Bound(a) => commands::bound(&a),
        Command::Verify(a) => commands::verify(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ahext: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
