//! Command-line front end for `qpfu-core`: solving families of games with
//! unawareness, running the penny-flip verification suites, evaluating plays
//! and reducing strategic forms.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qpfu_core::pennyflip::Preset;

pub use commands::{FamilySource, Outcome, Suite, DEFAULT_SEED};
pub use document::{parse_family, serialize_family};
pub use error::{CliError, EXIT_INPUT, EXIT_NO_SOLUTION, EXIT_OK, EXIT_VERIFICATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "qpfu",
    version,
    about = "Games with unawareness and the quantum penny flip"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for sampled checks; recorded in every report.
    #[arg(long, global = true, env = "QPFU_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Numerical tolerance; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extended Nash equilibria of a family.
    Solve {
        #[arg(required_unless_present = "preset")]
        file: Option<PathBuf>,
        /// Bundled family instead of a file.
        #[arg(long, conflicts_with = "file", value_parser = parse_preset)]
        preset: Option<Preset>,
        #[arg(long, default_value_t = 64)]
        max_solutions: usize,
    },
    /// Sampled verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Payoff and final Bloch vector of one play.
    Payoff {
        #[arg(long, allow_hyphen_values = true)]
        u1: String,
        #[arg(long, allow_hyphen_values = true)]
        u2: String,
        #[arg(long, allow_hyphen_values = true)]
        u3: String,
    },
    /// Strategic and reduced strategic form of a game or game tree.
    Reduce { file: PathBuf },
    /// Checks a family against the four axioms.
    Validate {
        #[arg(required_unless_present = "preset")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file", value_parser = parse_preset)]
        preset: Option<Preset>,
    },
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: qpfu_core::Error| e.to_string())
}

fn source<'a>(file: &'a Option<PathBuf>, preset: &Option<Preset>) -> FamilySource<'a> {
    match (file, preset) {
        (Some(f), _) => FamilySource::File(f),
        (None, Some(p)) => FamilySource::Preset(*p),
        (None, None) => unreachable!("clap requires a file or a preset"),
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Solve {
            file,
            preset,
            max_solutions,
        } => commands::solve(
            &source(file, preset),
            cli.tol.unwrap_or(commands::DEFAULT_TOL),
            *max_solutions,
            cli.seed,
        ),
        Command::Verify { suite, samples } => {
            Ok(commands::verify(*suite, *samples, cli.tol, cli.seed))
        }
        Command::Payoff { u1, u2, u3 } => commands::payoff(u1, u2, u3, cli.seed),
        Command::Reduce { file } => commands::reduce(file, cli.seed),
        Command::Validate { file, preset } => commands::validate(&source(file, preset), cli.seed),
    }
}

/// The report in the requested format.
pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => outcome.report.to_json() + "\n",
        Format::Text => outcome.text.clone(),
    }
}
