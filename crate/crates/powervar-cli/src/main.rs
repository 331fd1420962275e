//! `powervar`: command-line pricer for diffusions whose variance grows
//! superlinearly in the spot.
//!
//! Four subcommands share one flag set: `price` evaluates the contract,
//! `coeffs` dumps the expansion coefficients, `validate` runs the
//! internal-consistency report, and `converge` tabulates a truncation study.
//! Output is a single JSON or CSV document on stdout (or at --output);
//! diagnostics go to stderr under the `PRICER_LOG` level.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 rejected parameters, 3 numerical
//! failure, 4 validation checks failed.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use powervar::{ErrorKind, PricingError};

use config::CommonArgs;

/// Process-level failure with its exit-code mapping.
#[derive(Debug)]
pub enum CliError {
    /// Unusable flag, config key, or value.
    InvalidParams(String),
    /// Filesystem failure reading a config or writing the output document.
    Io(String),
    /// Library failure; splits into exits 2 and 3 by its kind.
    Pricing(PricingError),
    /// Validation checks failed after the report was written.
    ValidationFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::InvalidParams(_) => 2,
            CliError::Pricing(e) => match e.kind() {
                ErrorKind::InvalidParams => 2,
                ErrorKind::Numerical => 3,
            },
            CliError::ValidationFailed(_) => 4,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Io(_) => "IO",
            CliError::InvalidParams(_) => "INVALID_PARAMS",
            CliError::Pricing(e) => e.code(),
            CliError::ValidationFailed(_) => "VALIDATION_FAILED",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(msg) | CliError::InvalidParams(msg) => msg.clone(),
            CliError::Pricing(e) => e.to_string(),
            CliError::ValidationFailed(n) => format!("{n} validation check(s) failed"),
        }
    }
}

impl From<PricingError> for CliError {
    fn from(e: PricingError) -> Self {
        CliError::Pricing(e)
    }
}

#[derive(Parser)]
#[command(
    name = "powervar",
    version,
    about = "Spectral pricer for power-variance diffusions, with finite-difference and Monte Carlo cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price the contract at the requested spots.
    Price(CommonArgs),
    /// Print the expansion coefficients with their per-mode discounts.
    Coeffs(CommonArgs),
    /// Run the internal-consistency checks and emit the report.
    Validate(CommonArgs),
    /// Tabulate prices and reconstruction errors across truncation levels.
    Converge(CommonArgs),
}

fn main() -> ExitCode {
    // Diagnostics go to stderr so stdout stays a clean document.
    let env = env_logger::Env::new().filter_or("PRICER_LOG", "warn");
    env_logger::Builder::from_env(env).init();

    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Price(args) => commands::price(args),
        Command::Coeffs(args) => commands::coeffs(args),
        Command::Validate(args) => commands::validate(args),
        Command::Converge(args) => commands::converge(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
