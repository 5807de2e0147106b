//! The four subcommands, each returning rendered output.

use std::collections::BTreeMap;

use laguerre_cesaro::conditions::{
    check_condition_growth, check_condition_tail, default_growth_grid, default_tail_grid, ConditionReport,
    GRID_STABILITY,
};
use laguerre_cesaro::expansion::{fourier_laguerre_coeffs, CoefficientTable, ROUTE_FLOOR, ROUTE_RTOL};
use laguerre_cesaro::ratelab::{
    deviation_sweep, lemma1_envelope, lemma2_envelope, lemma3_envelope, log_spaced_n, BinomEnvelope,
    EnvelopeReport, SweepResult, BINOM_N_MAX, ENVELOPE_STABILITY, LEMMA_N_MAX,
};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, CliResult};
use crate::output::{csv, fmt_f64, fmt_opt, json, Report};

fn tolerances(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn warn_unconverged(what: &str, flags: &[bool]) {
    let bad = flags.iter().filter(|&&c| !c).count();
    if bad > 0 {
        eprintln!("warning: {bad} {what} did not meet the requested tolerance at the largest rule");
    }
}

pub type CoeffsReport = Report<ExperimentConfig, CoefficientTable>;

pub fn coeffs(config: &ExperimentConfig) -> CliResult<String> {
    config.check_coeffs()?;
    let f = config.function.build();
    let table = fourier_laguerre_coeffs(&f, config.alpha, config.n_max, config.rtol)?;
    warn_unconverged("coefficients", &table.converged);
    Ok(match config.format {
        Format::Csv => csv(
            &["nu", "a_nu", "achieved_rtol", "converged"],
            table.values.iter().enumerate().map(|(nu, a)| {
                vec![
                    nu.to_string(),
                    fmt_f64(*a),
                    fmt_f64(table.achieved_rtols[nu]),
                    table.converged[nu].to_string(),
                ]
            }),
        ),
        Format::Json => json(&Report {
            command: "coeffs".into(),
            config: config.clone(),
            tolerances: tolerances(&[("rtol", config.rtol)]),
            results: table,
        }),
    })
}

pub type SweepReport = Report<ExperimentConfig, SweepResult>;

pub fn sweep(config: &ExperimentConfig) -> CliResult<String> {
    let params = config.sweep_params()?;
    let n_values = config.n_values()?;
    let f = config.function.build();
    let omega = config.function.omega();
    let result = deviation_sweep(&f, config.function.f0(), &omega, &params, &n_values, config.method, config.rtol)?;
    warn_unconverged("sweep entries", &result.converged);
    if let Some(slope) = result.fitted_slope {
        eprintln!("fitted log-log slope (upper half of n): {slope:.6}");
    }
    Ok(match config.format {
        Format::Csv => {
            let direct = config.method != laguerre_cesaro::expansion::Method::Kernel;
            let kernel: Option<&Vec<f64>> = match config.method {
                laguerre_cesaro::expansion::Method::Kernel => Some(&result.deviations),
                laguerre_cesaro::expansion::Method::Both => result.deviations_kernel.as_ref(),
                laguerre_cesaro::expansion::Method::Direct => None,
            };
            csv(
                &[
                    "n",
                    "deviation_direct",
                    "deviation_kernel",
                    "bound_theorem",
                    "bound_corollary_refined",
                    "bound_corollary_special",
                    "ratio",
                ],
                (0..result.n_values.len()).map(|i| {
                    vec![
                        result.n_values[i].to_string(),
                        if direct { fmt_f64(result.deviations[i]) } else { String::new() },
                        fmt_opt(kernel.map(|k| k[i])),
                        fmt_f64(result.bound_theorem[i]),
                        fmt_f64(result.bound_corollary_refined[i]),
                        fmt_f64(result.bound_corollary_special[i]),
                        fmt_opt(result.ratios[i]),
                    ]
                }),
            )
        }
        Format::Json => json(&Report {
            command: "sweep".into(),
            config: ExperimentConfig {
                eta: params.eta,
                ..config.clone()
            },
            tolerances: tolerances(&[
                ("rtol", config.rtol),
                ("route_rtol", ROUTE_RTOL),
                ("route_floor", ROUTE_FLOOR),
            ]),
            results: result,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionsResult {
    pub omega: String,
    pub growth: ConditionReport,
    pub tail: ConditionReport,
}

pub type ConditionsReport = Report<ExperimentConfig, ConditionsResult>;

pub fn check_conditions(config: &ExperimentConfig) -> CliResult<String> {
    config.base_params()?;
    let f = config.function.build();
    let f0 = config.function.f0();
    let omega = config.function.omega();
    omega.check_axioms()?;
    let growth = check_condition_growth(&f, f0, config.alpha, &omega, default_growth_grid())?;
    let tail = check_condition_tail(&f, f0, config.alpha, config.gamma, &omega, default_tail_grid())?;
    let result = ConditionsResult {
        omega: omega.label().to_string(),
        growth,
        tail,
    };
    Ok(match config.format {
        Format::Csv => csv(
            &["condition", "sup_ratio", "argmax_u", "refined_sup_ratio", "passed"],
            [("growth", &result.growth), ("tail", &result.tail)].into_iter().map(|(name, r)| {
                vec![
                    name.to_string(),
                    fmt_f64(r.sup_ratio),
                    fmt_f64(r.argmax_u),
                    fmt_f64(r.refined_sup_ratio),
                    r.passed.to_string(),
                ]
            }),
        ),
        Format::Json => json(&Report {
            command: "check-conditions".into(),
            config: config.clone(),
            tolerances: tolerances(&[("grid_stability", GRID_STABILITY)]),
            results: result,
        }),
    })
}

/// Settings of `verify-lemmas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaConfig {
    pub beta: f64,
    pub lambda: f64,
    pub c: f64,
    pub delta: f64,
    pub theta: f64,
    pub n_max: usize,
    pub n_count: usize,
    pub points: usize,
    pub binom_n_max: usize,
    pub binom_gammas: Vec<f64>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaResults {
    pub n_values: Vec<usize>,
    pub lemma1: EnvelopeReport,
    pub lemma2: EnvelopeReport,
    pub lemma3: Vec<BinomEnvelope>,
    pub lemma1_stable: bool,
    pub lemma2_stable: bool,
    pub lemma3_stable: bool,
}

pub type LemmaReport = Report<LemmaConfig, LemmaResults>;

pub fn verify_lemmas(config: &LemmaConfig) -> CliResult<String> {
    if !(config.theta > 0.0 && config.theta < 4.0) {
        return Err(CliError::Validation(format!(
            "θ must satisfy 0<θ<4 (got θ = {})",
            config.theta
        )));
    }
    if config.n_max == 0 || config.n_max > LEMMA_N_MAX || config.binom_n_max > BINOM_N_MAX {
        return Err(CliError::Validation(format!(
            "need 1 ≤ n_max ≤ {LEMMA_N_MAX} and binom_n_max ≤ {BINOM_N_MAX} (got {}, {})",
            config.n_max, config.binom_n_max
        )));
    }
    let n_values = log_spaced_n(1, config.n_max, config.n_count)?;
    let lemma1 = lemma1_envelope(config.beta, config.c, config.delta, &n_values, config.points)?;
    let lemma2 = lemma2_envelope(config.beta, config.lambda, config.delta, config.theta, &n_values, config.points)?;
    let lemma3 = config
        .binom_gammas
        .iter()
        .map(|&g| lemma3_envelope(g, config.binom_n_max, config.points))
        .collect::<laguerre_cesaro::Result<Vec<_>>>()?;
    let results = LemmaResults {
        lemma1_stable: lemma1.is_stable(),
        lemma2_stable: lemma2.is_stable(),
        lemma3_stable: lemma3.iter().all(|e| e.is_stable() && e.monotone),
        n_values,
        lemma1,
        lemma2,
        lemma3,
    };
    Ok(match config.format {
        Format::Csv => {
            let mut rows = Vec::new();
            for (lemma, env) in [("1", &results.lemma1), ("2", &results.lemma2)] {
                for (regime, r) in [("A", &env.regime_a), ("B", &env.regime_b)] {
                    rows.push(vec![
                        lemma.to_string(),
                        regime.to_string(),
                        fmt_f64(r.sup),
                        fmt_f64(r.refined_sup),
                        r.argmax_n.to_string(),
                        fmt_f64(r.argmax_x),
                        r.is_stable().to_string(),
                    ]);
                }
            }
            for e in &results.lemma3 {
                for (side, v, rv) in [("min", e.min_ratio, e.refined_min_ratio), ("max", e.max_ratio, e.refined_max_ratio)] {
                    rows.push(vec![
                        "3".to_string(),
                        format!("gamma={} {side}", e.gamma),
                        fmt_f64(v),
                        fmt_f64(rv),
                        String::new(),
                        String::new(),
                        (e.is_stable() && e.monotone).to_string(),
                    ]);
                }
            }
            csv(&["lemma", "regime", "sup", "refined_sup", "argmax_n", "argmax_x", "stable"], rows)
        }
        Format::Json => json(&Report {
            command: "verify-lemmas".into(),
            config: config.clone(),
            tolerances: tolerances(&[("envelope_stability", ENVELOPE_STABILITY)]),
            results,
        }),
    })
}
