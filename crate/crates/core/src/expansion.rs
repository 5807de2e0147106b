//! Fourier–Laguerre coefficients, partial sums and `(C, γ)` means.
//!
//! Coefficients are normalized per index:
//!
//! ```text
//! a_ν(f) = 1/(Γ(α+1) A_ν^{(α)}) ∫₀^∞ e^{-y} y^α L_ν^{(α)}(y) f(y) dy
//! ```
//!
//! The normalizer `A_ν^{(α)} = L_ν^{(α)}(0)` depends on the coefficient index,
//! which makes `Σ a_ν A_ν^{(α)}` the partial sum at the origin. Partial sums
//! `S_k` run over `ν = 0..=k`.
//!
//! At `x = 0` the `(C, γ)` mean has the closed kernel form
//! `S_n^{(γ,α)} f(0) = 1/(Γ(α+1) A_n^{(γ)}) ∫ e^{-y} y^α L_n^{(α+γ+1)}(y) f(y) dy`,
//! computed by [`cesaro_mean_kernel_at_zero`] without ever forming the
//! coefficients. [`cesaro_mean_direct`] follows the definition literally.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::function::WeightedFunction;
use crate::quadrature::{refine_vec_with_floor, RuleKind, ROUNDING_FLOOR, MAX_NODES};
use crate::specfun::{
    gen_binom, gen_binom_product, gen_binom_signed, laguerre_eval, laguerre_sequence, laguerre_sequence_into,
    log_gamma, GEN_BINOM_DIRECT_MAX,
};
use crate::{Error, Result};

/// Largest coefficient index / Cesàro index supported.
pub const MAX_INDEX: usize = 512;

/// The scalar parameters `(α, γ, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub alpha: f64,
    pub gamma: f64,
    pub eta: Option<f64>,
}

impl ExpansionParams {
    /// Requires `α > -1` and `γ > -1`.
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "α must satisfy α > -1 (got α = {alpha})"
            )));
        }
        if !(gamma > -1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "γ must satisfy γ > -1 (got γ = {gamma})"
            )));
        }
        Ok(Self {
            alpha,
            gamma,
            eta: None,
        })
    }

    /// Attaches `η`, checking `0 < η < -(2(α-γ)+1)/4`.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        let upper = self.eta_upper();
        if !(eta > 0.0 && eta < upper) {
            return Err(Error::InvalidParameter(format!(
                "η = {eta} violates 0 < η < -(2(α-γ)+1)/4 = {upper} (α = {}, γ = {})",
                self.alpha, self.gamma
            )));
        }
        self.eta = Some(eta);
        Ok(self)
    }

    /// `(2(α-γ)+1)/4`, negative exactly when `γ > α + 1/2`.
    pub fn rate_exponent(&self) -> f64 {
        (2.0 * (self.alpha - self.gamma) + 1.0) / 4.0
    }

    /// Upper end of the admissible `η` window.
    pub fn eta_upper(&self) -> f64 {
        -self.rate_exponent()
    }

    /// The special choice `η = -(2(α-γ)+1)/8`, the midpoint of the window.
    pub fn special_eta(&self) -> f64 {
        -self.rate_exponent() / 2.0
    }

    /// The rate results assume `γ > α + 1/2`.
    pub fn check_rate_hypothesis(&self) -> Result<()> {
        if self.gamma > self.alpha + 0.5 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "rate statements need γ > α + 1/2 (got α = {}, γ = {})",
                self.alpha, self.gamma
            )))
        }
    }

    pub fn eta_or_err(&self) -> Result<f64> {
        self.eta.ok_or_else(|| {
            Error::InvalidParameter("η is required and must satisfy 0 < η < -(2(α-γ)+1)/4".to_string())
        })
    }
}

/// How a `(C, γ)` mean at the origin is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Coefficients, partial sums, Cesàro weights.
    Direct,
    /// Single integral against `L_n^{(α+γ+1)}`.
    Kernel,
    /// Both, cross-checked.
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Kernel => "kernel",
            Method::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "kernel" => Ok(Method::Kernel),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidParameter(format!(
                "method must be one of direct|kernel|both (got {other:?})"
            ))),
        }
    }
}

/// A value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// Coefficients `a_0 … a_N` of one function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub alpha: f64,
    pub values: Vec<f64>,
    /// Absolute change of each coefficient under the last rule doubling.
    pub error_estimates: Vec<f64>,
    pub converged: Vec<bool>,
    /// Largest entry of `achieved_rtols`.
    pub achieved_rtol: f64,
    /// Per coefficient: last change relative to its integrand's `Σ w|g|`.
    pub achieved_rtols: Vec<f64>,
    pub source: String,
}

impl CoefficientTable {
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

struct Integrals {
    values: Vec<f64>,
    errors: Vec<f64>,
    mass: Vec<f64>,
    converged: Vec<bool>,
}

/// Starting node count for integrands `poly × f` where `f` has an exact
/// exponential-power form: the polynomial part is integrated exactly once
/// `m > degree / 2`.
fn exact_start(degree: usize) -> usize {
    (degree.div_ceil(2) + 8).clamp(32, MAX_NODES)
}

/// Rounding allowance for integrands containing Laguerre polynomials of
/// degree up to `degree`: the recurrence loses up to a few ulps per step.
fn rounding_floor(degree: usize) -> f64 {
    ROUNDING_FLOOR + 16.0 * degree as f64
}

/// Starting node count for general callables.
fn generic_start(degree: usize) -> usize {
    (2 * degree + 16).clamp(64, MAX_NODES)
}

/// `∫₀^∞ e^{-y} y^α P_k(y) f(y) dy` for `k < dim`, where `poly(y, out)`
/// writes `P_0(y) … P_{dim-1}(y)` (polynomials of degree ≤ `degree`).
fn weighted_integrals(
    f: &dyn WeightedFunction,
    alpha: f64,
    degree: usize,
    dim: usize,
    rtol: f64,
    poly: impl Fn(f64, &mut [f64]) -> Result<()> + Copy,
) -> Result<Integrals> {
    let mut out = Integrals {
        values: vec![0.0; dim],
        errors: vec![0.0; dim],
        mass: vec![0.0; dim],
        converged: vec![true; dim],
    };
    let mut accumulate = |scale: f64, part: crate::quadrature::RefinedVec| {
        for k in 0..dim {
            out.values[k] += scale * part.values[k];
            out.errors[k] += scale.abs() * part.error_estimates[k];
            out.mass[k] += scale.abs() * part.abs_mass[k];
            out.converged[k] &= part.converged[k];
        }
    };

    match f.exp_power_terms() {
        Some(terms) => {
            for term in terms.iter().filter(|t| t.coeff != 0.0) {
                // ∫ e^{-(1+r)y} y^{α+s} P(y) dy = (1+r)^{-(α+s+1)} ∫ e^{-t} t^{α+s} P(t/(1+r)) dt
                let exponent = alpha + term.power;
                let stretch = 1.0 + term.rate;
                let scale = term.coeff * stretch.powf(-(exponent + 1.0));
                let part = refine_vec_with_floor(
                    RuleKind::Laguerre,
                    exponent,
                    exact_start(degree),
                    dim,
                    rtol,
                    rounding_floor(degree),
                    |t, buf| poly(t / stretch, buf),
                )?;
                accumulate(scale, part);
            }
        }
        None => {
            let floor = rounding_floor(degree);
            let part = refine_vec_with_floor(RuleKind::Laguerre, alpha, generic_start(degree), dim, rtol, floor, |y, buf| {
                poly(y, buf)?;
                let fy = f.eval(y);
                for v in buf.iter_mut() {
                    *v *= fy;
                }
                Ok(())
            })?;
            accumulate(1.0, part);
        }
    }
    Ok(out)
}

fn check_index(index: usize, max: usize) -> Result<()> {
    if index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            what: "α must satisfy α > -1",
            value: alpha,
        });
    }
    Ok(())
}

/// Coefficients `a_0 … a_{n_max}` of `f` from one shared pass of the Laguerre
/// recurrence per quadrature node.
pub fn fourier_laguerre_coeffs(
    f: &dyn WeightedFunction,
    alpha: f64,
    n_max: usize,
    rtol: f64,
) -> Result<CoefficientTable> {
    check_alpha(alpha)?;
    check_index(n_max, MAX_INDEX)?;
    let dim = n_max + 1;
    let integrals = weighted_integrals(f, alpha, n_max, dim, rtol, |y, buf| {
        laguerre_sequence_into(alpha, y, buf)
    })?;
    let ln_gamma_a1 = log_gamma(alpha + 1.0)?;
    let mut values = Vec::with_capacity(dim);
    let mut errors = Vec::with_capacity(dim);
    let mut achieved = Vec::with_capacity(dim);
    for nu in 0..dim {
        let norm = (ln_gamma_a1 + gen_binom(nu, alpha)?.log_value).exp();
        values.push(integrals.values[nu] / norm);
        errors.push(integrals.errors[nu] / norm);
        achieved.push(if integrals.mass[nu] > 0.0 {
            integrals.errors[nu] / integrals.mass[nu]
        } else {
            0.0
        });
    }
    Ok(CoefficientTable {
        alpha,
        values,
        error_estimates: errors,
        converged: integrals.converged,
        achieved_rtol: achieved.iter().copied().fold(0.0, f64::max),
        achieved_rtols: achieved,
        source: f.label(),
    })
}

/// `S_k f(x) = Σ_{ν=0}^{k} a_ν L_ν^{(α)}(x)`.
pub fn partial_sum(table: &CoefficientTable, x: f64, k: usize) -> Result<f64> {
    check_index(k, table.max_index())?;
    let l = laguerre_sequence(k, table.alpha, x)?;
    Ok(table.values[..=k].iter().zip(&l).map(|(a, l)| a * l).sum())
}

/// All partial sums `S_0 f(x) … S_k f(x)`.
pub fn partial_sums(table: &CoefficientTable, x: f64, k: usize) -> Result<Vec<f64>> {
    check_index(k, table.max_index())?;
    let l = laguerre_sequence(k, table.alpha, x)?;
    let mut acc = 0.0;
    Ok(table.values[..=k]
        .iter()
        .zip(&l)
        .map(|(a, l)| {
            acc += a * l;
            acc
        })
        .collect())
}

/// Cesàro weights `A_{n-k}^{(γ-1)} / A_n^{(γ)}` for `k = 0..=n`.
pub fn cesaro_weights(n: usize, gamma: f64) -> Result<Vec<f64>> {
    if !(gamma > -1.0) || !gamma.is_finite() {
        return Err(Error::Domain {
            what: "Cesàro order must satisfy γ > -1",
            value: gamma,
        });
    }
    if n <= GEN_BINOM_DIRECT_MAX {
        let denom = gen_binom_product(n, gamma);
        return Ok((0..=n).map(|k| gen_binom_product(n - k, gamma - 1.0) / denom).collect());
    }
    let log_denom = gen_binom(n, gamma)?.log_value;
    (0..=n)
        .map(|k| {
            let (sign, log) = gen_binom_signed(n - k, gamma - 1.0)?;
            Ok(if sign == 0.0 { 0.0 } else { sign * (log - log_denom).exp() })
        })
        .collect()
}

/// `S_n^{(γ,α)} f(x) = (1/A_n^{(γ)}) Σ_{k=0}^{n} A_{n-k}^{(γ-1)} S_k f(x)`.
pub fn cesaro_mean_direct(table: &CoefficientTable, params: &ExpansionParams, n: usize, x: f64) -> Result<f64> {
    check_index(n, table.max_index())?;
    let weights = cesaro_weights(n, params.gamma)?;
    let sums = partial_sums(table, x, n)?;
    Ok(weights.iter().zip(&sums).map(|(w, s)| w * s).sum())
}

fn direct_estimate(table: &CoefficientTable, params: &ExpansionParams, n: usize) -> Result<Estimate> {
    let value = cesaro_mean_direct(table, params, n, 0.0)?;
    let mut error = 0.0;
    for nu in 0..=n {
        error += table.error_estimates[nu] * gen_binom(nu, table.alpha)?.value;
    }
    Ok(Estimate {
        value,
        error_estimate: error,
        converged: table.converged[..=n].iter().all(|&c| c),
    })
}

/// `S_n^{(γ,α)} f(0)` through the single kernel integral against
/// `L_n^{(α+γ+1)}`.
pub fn cesaro_mean_kernel_at_zero(
    f: &dyn WeightedFunction,
    params: &ExpansionParams,
    n: usize,
    rtol: f64,
) -> Result<Estimate> {
    check_index(n, MAX_INDEX)?;
    let beta = params.alpha + params.gamma + 1.0;
    let integrals = weighted_integrals(f, params.alpha, n, 1, rtol, |y, buf| {
        buf[0] = laguerre_eval(n, beta, y)?.value;
        Ok(())
    })?;
    let norm = (log_gamma(params.alpha + 1.0)? + gen_binom(n, params.gamma)?.log_value).exp();
    Ok(Estimate {
        value: integrals.values[0] / norm,
        error_estimate: integrals.errors[0] / norm,
        converged: integrals.converged[0],
    })
}

/// `S_k f(0) = (1/Γ(α+1)) ∫ e^{-y} y^α L_k^{(α+1)}(y) f(y) dy`.
pub fn partial_sum_kernel_at_zero(f: &dyn WeightedFunction, alpha: f64, k: usize, rtol: f64) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_index(k, MAX_INDEX)?;
    let integrals = weighted_integrals(f, alpha, k, 1, rtol, |y, buf| {
        buf[0] = laguerre_eval(k, alpha + 1.0, y)?.value;
        Ok(())
    })?;
    let norm = log_gamma(alpha + 1.0)?.exp();
    Ok(Estimate {
        value: integrals.values[0] / norm,
        error_estimate: integrals.errors[0] / norm,
        converged: integrals.converged[0],
    })
}

/// Relative agreement used whenever the two routes are compared:
/// `|a - b| ≤ rtol · max(|a|, |b|) + floor`.
pub fn routes_agree(a: f64, b: f64, rtol: f64, floor: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()) + floor
}

/// Tolerance of the built-in direct/kernel cross-check.
pub const ROUTE_RTOL: f64 = 1e-6;
/// Absolute floor of the cross-check, the rounding level of an `O(1)` mean.
pub const ROUTE_FLOOR: f64 = 1e-12;

/// `|S_n^{(γ,α)} f(0) - f0|`.
///
/// With [`Method::Both`] both routes are evaluated, the direct value is
/// returned and a disagreement beyond [`ROUTE_RTOL`] is an error.
pub fn deviation_at_zero(
    f: &dyn WeightedFunction,
    f0: f64,
    params: &ExpansionParams,
    n: usize,
    method: Method,
    rtol: f64,
) -> Result<Estimate> {
    let mean = match method {
        Method::Direct => {
            let table = fourier_laguerre_coeffs(f, params.alpha, n, rtol)?;
            direct_estimate(&table, params, n)?
        }
        Method::Kernel => cesaro_mean_kernel_at_zero(f, params, n, rtol)?,
        Method::Both => {
            let table = fourier_laguerre_coeffs(f, params.alpha, n, rtol)?;
            let direct = direct_estimate(&table, params, n)?;
            let kernel = cesaro_mean_kernel_at_zero(f, params, n, rtol)?;
            if !routes_agree(direct.value, kernel.value, ROUTE_RTOL, ROUTE_FLOOR) {
                return Err(Error::MethodMismatch {
                    n,
                    direct: direct.value,
                    kernel: kernel.value,
                });
            }
            direct
        }
    };
    Ok(Estimate {
        value: (mean.value - f0).abs(),
        ..mean
    })
}

/// Builds the coefficient table once and evaluates direct means at the
/// origin for several `n` (all `≤ table.max_index()`).
pub(crate) fn direct_means_at_zero(
    table: &CoefficientTable,
    params: &ExpansionParams,
    n_values: &[usize],
) -> Result<Vec<Estimate>> {
    n_values.iter().map(|&n| direct_estimate(table, params, n)).collect()
}
