//! plasmode: plasmon modes of concentric multi-layer structures.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// CLI error split by exit class: 1 for validation/config/I-O problems,
/// 2 for numerical diagnostics (resonant singularities, bound
/// violations).
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<plasmode_core::Error> for CliError {
    fn from(e: plasmode_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(
    name = "plasmode",
    version,
    about = "Plasmon resonance modes of concentric multi-layer spheres and disks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All 3D plasmon modes (roots q*, pairs lambda+/-, permittivities)
    Modes(commands::geometry::ModesArgs),
    /// Characteristic polynomial coefficients
    Charpoly(commands::geometry::CharpolyArgs),
    /// 2D mode contrasts at one angular order
    Modes2d(commands::geometry::Modes2dArgs),
    /// Scan |f_N(q)| for resonance-like low bands
    Band(commands::geometry::BandArgs),
    /// Evaluate the potential along a radial ray
    Field(commands::field::FieldArgs),
    /// Sweep the polarization-tensor norm over frequency
    Sweep(commands::sweep::SweepArgs),
    /// Run the oracle-equivalence and identity suites
    Verify(commands::verify::VerifyArgs),
    /// Regenerate the equidistant N=19 mode table and diff the reference
    Table1,
    /// Regenerate the geometric N=19 mode table and diff the reference
    Table2,
}

fn main() -> ExitCode {
    // exit 2 is reserved for numerical diagnostics; argument errors are
    // validation failures (exit 1)
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!(
                "error: {}",
                text.lines().next().unwrap_or("invalid arguments")
            );
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Modes(args) => commands::geometry::run_modes(&args),
        Command::Charpoly(args) => commands::geometry::run_charpoly(&args),
        Command::Modes2d(args) => commands::geometry::run_modes2d(&args),
        Command::Band(args) => commands::geometry::run_band(&args),
        Command::Field(args) => commands::field::run(&args),
        Command::Sweep(args) => commands::sweep::run(&args),
        Command::Verify(args) => commands::verify::run(&args),
        Command::Table1 => commands::tables::run(commands::tables::Which::One),
        Command::Table2 => commands::tables::run(commands::tables::Which::Two),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
