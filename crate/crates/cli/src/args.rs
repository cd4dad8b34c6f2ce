use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leggett_core::canonical::CanonicalState;

#[derive(Debug, Parser)]
#[command(
    name = "leggett",
    version,
    about = "Leggett-inequality checks for entangled pairs and hidden-variable models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the relative analyzer angle for a canonical state.
    Sweep(SweepArgs),
    /// Check one triple of averages against the Leggett bounds.
    Check(CheckArgs),
    /// Monte Carlo sweep of a built-in hidden-variable model.
    Hvt(HvtArgs),
    /// Run the exact-identity verification suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    PsiPlus,
    PsiMinus,
    Singlet,
}

impl From<StateArg> for CanonicalState {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::PsiPlus => CanonicalState::PsiPlus,
            StateArg::PsiMinus => CanonicalState::PsiMinus,
            StateArg::Singlet => CanonicalState::Singlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Independent Malus-law responses with polarizations --u and --v.
    Malus,
    /// Fixed outcomes --sign-a and --sign-b.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub state: StateArg,
    #[arg(long, default_value_t = 360)]
    pub grid: usize,
    /// Absolute angle of analyzer B; A sits at offset + delta.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub offset: f64,
    /// Read angle flags in degrees.
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub av_a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub av_b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub av_ab: f64,
    #[arg(long, default_value_t = leggett_core::inequality::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HvtArgs {
    #[arg(long, value_enum, default_value = "malus")]
    pub model: ModelArg,
    /// Polarization of photon A (malus model).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u: f64,
    /// Polarization of photon B (malus model).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v: f64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true, value_parser = parse_sign)]
    pub sign_a: i32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true, value_parser = parse_sign)]
    pub sign_b: i32,
    #[arg(long, default_value_t = 360)]
    pub grid: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub offset: f64,
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_sign(s: &str) -> Result<i32, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(format!("'{other}' is not +1 or -1")),
    }
}

/// Converts an angle flag to radians.
pub fn to_radians(value: f64, degrees: bool) -> f64 {
    if degrees {
        value.to_radians()
    } else {
        value
    }
}
