//! Command-line front end for `laguerre-cesaro`: coefficient tables,
//! deviation sweeps, condition checks and Laguerre/binomial envelopes.
//!
//! Exit codes: 0 success, 1 I/O error, 2 validation error, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod function_spec;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::LemmaConfig;
use crate::config::{ExperimentArgs, Format};
use crate::error::{CliError, CliResult};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "LAGUERRE_CESARO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "laguerre-cesaro", version, about = "Fourier–Laguerre (C,γ) means: experiments at the origin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier–Laguerre coefficients a_0 … a_{n_max}.
    Coeffs(ExperimentArgs),
    /// Deviations |S_n f(0) - f(0)| over a log-spaced n schedule, with bound curves.
    Sweep(ExperimentArgs),
    /// Growth and tail conditions on Δ₀f against the paired modulus.
    CheckConditions(ExperimentArgs),
    /// Numerical envelopes of L_n^(β) and A_n^(γ).
    VerifyLemmas(LemmaArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Regime boundary c/n near the origin.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Inner regime boundary δ.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// 0<θ<4; the oscillatory regime ends at (4-θ)n.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 2000)]
    pub n_max: usize,
    #[arg(long, default_value_t = 24)]
    pub n_count: usize,
    /// x-grid points per regime.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    #[arg(long, default_value_t = 100_000)]
    pub binom_n_max: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

/// Orders of the binomial envelope.
pub const BINOM_GAMMAS: [f64; 4] = [-0.5, 0.5, 1.0, 2.5];

/// Sizes the global worker pool from [`THREADS_ENV`], once per process.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer (got {value:?})")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a command and returns the rendered output with its destination.
pub fn execute(cli: Cli) -> CliResult<(String, Option<PathBuf>)> {
    match cli.command {
        Command::Coeffs(args) => {
            let config = args.resolve()?;
            Ok((commands::coeffs(&config)?, config.output))
        }
        Command::Sweep(args) => {
            let config = args.resolve()?;
            Ok((commands::sweep(&config)?, config.output))
        }
        Command::CheckConditions(args) => {
            let config = args.resolve()?;
            Ok((commands::check_conditions(&config)?, config.output))
        }
        Command::VerifyLemmas(args) => {
            let config = LemmaConfig {
                beta: args.beta,
                lambda: args.lambda,
                c: args.c,
                delta: args.delta,
                theta: args.theta,
                n_max: args.n_max,
                n_count: args.n_count,
                points: args.points,
                binom_n_max: args.binom_n_max,
                binom_gammas: BINOM_GAMMAS.to_vec(),
                format: args.format.into(),
            };
            Ok((commands::verify_lemmas(&config)?, args.output))
        }
    }
}

/// [`execute`] and write the result to the chosen file or stdout.
pub fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let (text, output) = execute(cli)?;
    match output {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?,
        None => print!("{text}"),
    }
    Ok(())
}
