//! `grad-slip`: coefficient tables, Couette profiles and convergence studies.

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "grad-slip", version, about)]
struct Cli {
    /// Flat `key = value` file; keys match the long flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Shared parameters. Lists are comma separated; ε also accepts `2^a..2^b`.
#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    /// Moment order(s).
    #[arg(long = "M")]
    pub m: Option<String>,
    /// Accommodation coefficient(s) χ.
    #[arg(long)]
    pub chi: Option<String>,
    /// Knudsen number(s) ε.
    #[arg(long)]
    pub eps: Option<String>,
    /// Number of grid cells.
    #[arg(long)]
    pub grid: Option<String>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<String>,
    /// Output time(s).
    #[arg(long = "T")]
    pub t: Option<String>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<String>,
    /// Wall velocity: `cosine` or a CSV file of (t, u) samples.
    #[arg(long)]
    pub wall: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Matrix summaries: sizes, A₂ eigenvalue signature, BC certificates.
    Assemble {
        #[command(flatten)]
        p: Params,
        /// Report on the Couette chain instead (odd M only).
        #[arg(long)]
        couette: bool,
    },
    /// Slip and jump coefficients per (M, χ).
    SlipCoeffs {
        #[command(flatten)]
        p: Params,
    },
    /// Moment and Navier–Stokes Couette profiles.
    Couette {
        #[command(flatten)]
        p: Params,
        /// `reference` tabulated k0, k2 or `computed` from order M+1.
        #[arg(long)]
        slip: Option<String>,
    },
    /// Error-vs-ε data and fitted rates.
    Convergence {
        #[command(flatten)]
        p: Params,
        /// Also run the moment-vs-asymptotic and NS-vs-composite studies.
        #[arg(long)]
        composite: bool,
    },
    /// Order-by-order slip condition records.
    SlipBcRecords {
        #[command(flatten)]
        p: Params,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => config::FileConfig::load(path)?,
        None => config::FileConfig::default(),
    };
    let written = match cli.command {
        Command::Assemble { p, couette } => commands::assemble(&p, &file, couette)?,
        Command::SlipCoeffs { p } => commands::slip_coeffs(&p, &file)?,
        Command::Couette { p, slip } => commands::couette(&p, &file, slip)?,
        Command::Convergence { p, composite } => commands::convergence(&p, &file, composite)?,
        Command::SlipBcRecords { p } => commands::slip_bc_records(&p, &file)?,
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}
