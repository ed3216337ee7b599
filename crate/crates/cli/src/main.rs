#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;
mod svg;

use clap::{Parser, Subcommand};
use config::Config;
use std::path::PathBuf;
use std::process::ExitCode;

/// Secrecy rates of lattice codes for the Gaussian wiretap channel with a
/// cooperative jammer.
#[derive(Debug, Parser)]
#[command(name = "latsec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML file with flat key = value settings.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for Monte Carlo runs; overrides the config file.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Also write an SVG chart next to the CSV (requires --out).
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Secure degrees of freedom of every scheme across cross gains.
    SdofCurve,
    /// Finite-power secrecy rate frontiers against the Gaussian limit.
    RateCurve,
    /// Exhaustive checks of the representation, leakage and feasibility claims.
    Verify {
        /// Use the origin-favoring boundary rule; the checks must then fail.
        #[arg(long, hide = true)]
        broken_tie_break: bool,
    },
    /// Monte Carlo error rates of the integer expansion codes.
    Simulate,
    /// Rates with a mismatched eavesdropper channel estimate.
    Mismatch,
    /// Rates of the complex-gain scheme across phases and powers.
    Complex,
}

/// Outcome of a command: the table to emit and whether every check held.
pub struct Outcome {
    pub csv: String,
    pub svg: Option<String>,
    pub ok: bool,
}

/// Exit statuses.
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn run(cli: &Cli) -> Result<Outcome, String> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if cli.plot && cli.out.is_none() {
        return Err("--plot needs --out to place the SVG next to the CSV".into());
    }
    let seed = cli.seed.or(cfg.seed).unwrap_or(1);
    match &cli.command {
        Command::SdofCurve => commands::sdof_curve(&cfg),
        Command::RateCurve => commands::rate_curve(&cfg),
        Command::Verify { broken_tie_break } => commands::verify(&cfg, *broken_tie_break),
        Command::Simulate => commands::simulate(&cfg, seed),
        Command::Mismatch => commands::mismatch(&cfg),
        Command::Complex => commands::complex(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
            if let (true, Some(svg)) = (cli.plot, &outcome.svg) {
                let svg_path = path.with_extension("svg");
                if let Err(e) = std::fs::write(&svg_path, svg) {
                    eprintln!("error: cannot write {}: {e}", svg_path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            }
        }
        None => print!("{}", outcome.csv),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}
