//! Experiment configuration: flags layered over an optional JSON file layered
//! over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use laguerre_cesaro::expansion::{ExpansionParams, Method, MAX_INDEX};
use laguerre_cesaro::ratelab::log_spaced_n;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::function_spec::FunctionSpec;

pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_N_MIN: usize = 8;
pub const DEFAULT_N_MAX: usize = 512;
pub const DEFAULT_N_COUNT: usize = 16;
pub const DEFAULT_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Direct,
    Kernel,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Kernel => Method::Kernel,
            MethodArg::Both => Method::Both,
        }
    }
}

/// A function given either by name (`"f1"`, `"f2"`, `"const:3"`) or as a
/// structured spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionField {
    Name(String),
    Spec(FunctionSpec),
}

/// Flags shared by the experiment subcommands. Every field is optional so
/// that a config file can fill the gaps.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentArgs {
    /// Weight exponent α > -1.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Cesàro order γ.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Rate parameter, 0 < η < -(2(α-γ)+1)/4. Defaults to -(2(α-γ)+1)/8.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Exponent of f2.
    #[arg(long)]
    pub delta: Option<f64>,
    /// f1 | f2 | const:<c>.
    #[arg(long = "function", value_parser = parse_function_name)]
    #[serde(default)]
    pub function: Option<FunctionField>,
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Largest n (also the last coefficient index for `coeffs`).
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub n_count: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON file with any of the above keys; flags win on conflict.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn parse_function_name(s: &str) -> Result<FunctionField, String> {
    Ok(FunctionField::Name(s.to_string()))
}

impl ExperimentArgs {
    /// `self` where set, otherwise `fallback`.
    pub fn or(self, fallback: ExperimentArgs) -> ExperimentArgs {
        ExperimentArgs {
            alpha: self.alpha.or(fallback.alpha),
            gamma: self.gamma.or(fallback.gamma),
            eta: self.eta.or(fallback.eta),
            delta: self.delta.or(fallback.delta),
            function: self.function.or(fallback.function),
            n_min: self.n_min.or(fallback.n_min),
            n_max: self.n_max.or(fallback.n_max),
            n_count: self.n_count.or(fallback.n_count),
            method: self.method.or(fallback.method),
            rtol: self.rtol.or(fallback.rtol),
            format: self.format.or(fallback.format),
            output: self.output.or(fallback.output),
            config: self.config,
        }
    }

    pub fn from_file(path: &Path) -> CliResult<ExperimentArgs> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config file {}: {e}", path.display())))
    }

    /// Applies the config file (if any) and defaults.
    pub fn resolve(self) -> CliResult<ExperimentConfig> {
        let merged = match &self.config {
            Some(path) => {
                let file = ExperimentArgs::from_file(path)?;
                self.or(file)
            }
            None => self,
        };
        let delta = merged.delta.unwrap_or(DEFAULT_DELTA);
        let function = match merged.function {
            None => FunctionSpec::F1,
            Some(FunctionField::Name(name)) => FunctionSpec::parse(&name, delta)?,
            Some(FunctionField::Spec(spec)) => {
                spec.validate()?;
                spec
            }
        };
        Ok(ExperimentConfig {
            function,
            alpha: merged.alpha.unwrap_or(0.0),
            gamma: merged.gamma.unwrap_or(1.0),
            eta: merged.eta,
            n_min: merged.n_min.unwrap_or(DEFAULT_N_MIN),
            n_max: merged.n_max.unwrap_or(DEFAULT_N_MAX),
            n_count: merged.n_count.unwrap_or(DEFAULT_N_COUNT),
            method: merged.method.unwrap_or(MethodArg::Both).into(),
            rtol: merged.rtol.unwrap_or(DEFAULT_RTOL),
            format: merged.format.unwrap_or_default(),
            output: merged.output,
        })
    }
}

/// Fully resolved experiment settings, echoed into JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub function: FunctionSpec,
    pub alpha: f64,
    pub gamma: f64,
    pub eta: Option<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub n_count: usize,
    pub method: Method,
    pub rtol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// `α > -1`, `γ > -1`, `rtol ∈ [1e-13, 1e-3]`.
    pub fn base_params(&self) -> CliResult<ExpansionParams> {
        if !(1e-13..=1e-3).contains(&self.rtol) {
            return Err(CliError::Validation(format!(
                "rtol must lie in [1e-13, 1e-3] (got {})",
                self.rtol
            )));
        }
        Ok(ExpansionParams::new(self.alpha, self.gamma)?)
    }

    pub fn check_coeffs(&self) -> CliResult<()> {
        self.base_params()?;
        if self.n_max > MAX_INDEX {
            return Err(CliError::Validation(format!(
                "n_max must satisfy n_max ≤ {MAX_INDEX} (got {})",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Rate hypothesis, `η` window (defaulting to the midpoint) and the
    /// worked-example `γ` window of the built-in functions.
    pub fn sweep_params(&self) -> CliResult<ExpansionParams> {
        let params = self.base_params()?;
        if !(self.gamma > self.alpha + 0.5) {
            return Err(CliError::Validation(format!(
                "sweeps need γ > α + 1/2 (got α = {}, γ = {}); this also makes 0 < η < -(2(α-γ)+1)/4 nonempty",
                self.alpha, self.gamma
            )));
        }
        if let Some(warning) = self.example_window_warning() {
            eprintln!("warning: {warning}");
        }
        let eta = self.eta.unwrap_or_else(|| params.special_eta());
        let params = params.with_eta(eta)?;
        if self.n_min == 0 || self.n_min > self.n_max || self.n_max > MAX_INDEX || self.n_count == 0 {
            return Err(CliError::Validation(format!(
                "n schedule needs 1 ≤ n_min ≤ n_max ≤ {MAX_INDEX} and n_count ≥ 1 (got {}, {}, {})",
                self.n_min, self.n_max, self.n_count
            )));
        }
        Ok(params)
    }

    /// The worked-example `γ` window is sufficient for the tail condition,
    /// not necessary, so leaving it only produces a warning; the
    /// `check-conditions` command measures the condition directly.
    pub fn example_window_warning(&self) -> Option<String> {
        let (upper, text) = self.function.example_window(self.alpha)?;
        (!(self.gamma < upper)).then(|| {
            format!(
                "γ = {} lies outside {text} (upper end {upper} at α = {}); the tail condition is not guaranteed by the example estimate",
                self.gamma, self.alpha
            )
        })
    }

    pub fn n_values(&self) -> CliResult<Vec<usize>> {
        Ok(log_spaced_n(self.n_min, self.n_max, self.n_count)?)
    }
}
