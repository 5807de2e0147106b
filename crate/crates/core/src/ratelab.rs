//! Rate experiments at the origin: deviation sweeps over `n`, the bound
//! curves they are compared against, log-log slope fits and numerical
//! envelopes for the Laguerre and binomial estimates the rate rests on.
//!
//! All `O(·)` constants are unknown, so the bound curves use unit constants
//! and only ratios and their stability are meaningful.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::ModulusFunction;
use crate::expansion::{
    cesaro_mean_kernel_at_zero, direct_means_at_zero, fourier_laguerre_coeffs, routes_agree, Estimate,
    ExpansionParams, Method, MAX_INDEX, ROUTE_FLOOR, ROUTE_RTOL,
};
use crate::function::WeightedFunction;
use crate::specfun::{gen_binom, laguerre_log_abs};
use crate::{Error, Result};

/// Deviations at or below this are treated as exact zeros by the slope fit.
pub const SLOPE_FLOOR: f64 = 1e-12;
/// Largest `n` accepted by the Laguerre envelopes.
pub const LEMMA_N_MAX: usize = 2000;
/// Largest `n` accepted by the binomial envelope.
pub const BINOM_N_MAX: usize = 100_000;
/// Default x-grid size per regime.
pub const ENVELOPE_POINTS: usize = 400;
/// Largest relative change of an envelope supremum under 2× refinement.
pub const ENVELOPE_STABILITY: f64 = 0.1;

/// `n^p Σ_{k=1}^{n} ω(1/k)/k^{p+1} + ω(n^{-η})` with `p = η + (2(α-γ)+1)/4`.
pub fn theorem_bound(omega: &ModulusFunction, params: &ExpansionParams, n: usize) -> Result<f64> {
    let eta = params.eta_or_err()?;
    params.with_eta(eta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("bound curves start at n = 1".into()));
    }
    let p = eta + params.rate_exponent();
    let nf = n as f64;
    let sum: f64 = (1..=n)
        .map(|k| {
            let k = k as f64;
            omega.eval(1.0 / k) / k.powf(p + 1.0)
        })
        .sum();
    Ok(nf.powf(p) * sum + omega.eval(nf.powf(-eta)))
}

/// The two refined estimates available under stronger hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryBound {
    /// `n^q ω(n^η) + ω(n^{-η}) + ω(1/n)` with `q = (2(α-γ)+1)/4` and the
    /// configured `η`.
    pub refined: f64,
    /// `ω(n^{-η*})` with `η* = -(2(α-γ)+1)/8`.
    pub special: f64,
    /// `q + 1 < 0`.
    pub refined_hypothesis: bool,
    /// `η* ≤ 1`.
    pub special_hypothesis: bool,
}

/// Values are always computed; the flags say whether the hypotheses hold.
pub fn corollary_bound(omega: &ModulusFunction, params: &ExpansionParams, n: usize) -> Result<CorollaryBound> {
    let eta = params.eta_or_err()?;
    params.with_eta(eta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("bound curves start at n = 1".into()));
    }
    let q = params.rate_exponent();
    let special_eta = params.special_eta();
    let nf = n as f64;
    Ok(CorollaryBound {
        refined: nf.powf(q) * omega.eval(nf.powf(eta)) + omega.eval(nf.powf(-eta)) + omega.eval(1.0 / nf),
        special: omega.eval(nf.powf(-special_eta)),
        refined_hypothesis: q + 1.0 < 0.0,
        special_hypothesis: special_eta <= 1.0,
    })
}

/// Least-squares slope of `ln y` against `ln n`, `None` if fewer than two
/// points or any `y ≤ SLOPE_FLOOR`.
pub fn fit_loglog_slope(n_values: &[usize], y: &[f64]) -> Option<f64> {
    assert_eq!(n_values.len(), y.len());
    if n_values.len() < 2 || y.iter().any(|&v| !(v > SLOPE_FLOOR) || !v.is_finite()) {
        return None;
    }
    let xs: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Up to `count` distinct integers log-spaced on `[n_min, n_max]`, both ends
/// included.
pub fn log_spaced_n(n_min: usize, n_max: usize, count: usize) -> Result<Vec<usize>> {
    if n_min == 0 || n_max < n_min || count == 0 {
        return Err(Error::InvalidParameter(format!(
            "n schedule needs 1 ≤ n_min ≤ n_max and count ≥ 1 (got {n_min}, {n_max}, {count})"
        )));
    }
    if count == 1 {
        return Ok(vec![n_min]);
    }
    let (a, b) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .collect();
    out[0] = n_min;
    out[count - 1] = n_max;
    out.dedup();
    Ok(out)
}

/// Everything measured by one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub params: ExpansionParams,
    pub function: String,
    pub omega: String,
    pub f0: f64,
    pub method: Method,
    pub n_values: Vec<usize>,
    /// `|S_n f(0) - f0|` (direct route when both ran).
    pub deviations: Vec<f64>,
    /// Kernel-route deviations, present when `method = both`.
    pub deviations_kernel: Option<Vec<f64>>,
    pub error_estimates: Vec<f64>,
    pub converged: Vec<bool>,
    pub bound_theorem: Vec<f64>,
    pub bound_corollary_refined: Vec<f64>,
    pub bound_corollary_special: Vec<f64>,
    /// `deviations / bound_theorem`, `None` where the bound vanishes.
    pub ratios: Vec<Option<f64>>,
    /// Slope over the upper half of `n_values`, `None` for vanishing deviations.
    pub fitted_slope: Option<f64>,
    pub corollary_refined_hypothesis: bool,
    pub corollary_special_hypothesis: bool,
}

/// Sweeps `|S_n^{(γ,α)} f(0) - f0|` over `n_values` (increasing, `≤ 512`).
///
/// The direct route builds one coefficient table up to `max n`; the kernel
/// route evaluates each `n` independently in parallel. With
/// [`Method::Both`] every entry is cross-checked to [`ROUTE_RTOL`].
pub fn deviation_sweep(
    f: &dyn WeightedFunction,
    f0: f64,
    omega: &ModulusFunction,
    params: &ExpansionParams,
    n_values: &[usize],
    method: Method,
    rtol: f64,
) -> Result<SweepResult> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) || n_values[0] == 0 {
        return Err(Error::InvalidParameter(
            "n values must be a nonempty strictly increasing sequence starting at n ≥ 1".into(),
        ));
    }
    let n_max = *n_values.last().unwrap();
    if n_max > MAX_INDEX {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            max: MAX_INDEX,
        });
    }
    let eta = params.eta_or_err()?;
    params.with_eta(eta)?;

    let direct = || -> Result<Vec<Estimate>> {
        let table = fourier_laguerre_coeffs(f, params.alpha, n_max, rtol)?;
        direct_means_at_zero(&table, params, n_values)
    };
    let kernel = || -> Result<Vec<Estimate>> {
        n_values
            .par_iter()
            .map(|&n| cesaro_mean_kernel_at_zero(f, params, n, rtol))
            .collect()
    };
    let (means, kernel_means) = match method {
        Method::Direct => (direct()?, None),
        Method::Kernel => (kernel()?, None),
        Method::Both => {
            let (d, k) = rayon::join(direct, kernel);
            let (d, k) = (d?, k?);
            for ((n, a), b) in n_values.iter().zip(&d).zip(&k) {
                if !routes_agree(a.value, b.value, ROUTE_RTOL, ROUTE_FLOOR) {
                    return Err(Error::MethodMismatch {
                        n: *n,
                        direct: a.value,
                        kernel: b.value,
                    });
                }
            }
            (d, Some(k))
        }
    };

    let deviations: Vec<f64> = means.iter().map(|m| (m.value - f0).abs()).collect();
    let bound_theorem = n_values
        .iter()
        .map(|&n| theorem_bound(omega, params, n))
        .collect::<Result<Vec<_>>>()?;
    let corollary = n_values
        .iter()
        .map(|&n| corollary_bound(omega, params, n))
        .collect::<Result<Vec<_>>>()?;
    let ratios = deviations
        .iter()
        .zip(&bound_theorem)
        .map(|(d, b)| (*b > 0.0).then(|| d / b))
        .collect();
    let half = n_values.len() / 2;
    let fitted_slope = fit_loglog_slope(&n_values[half..], &deviations[half..]);

    Ok(SweepResult {
        params: *params,
        function: f.label(),
        omega: omega.label().to_string(),
        f0,
        method,
        n_values: n_values.to_vec(),
        deviations,
        deviations_kernel: kernel_means.map(|k| k.iter().map(|m| (m.value - f0).abs()).collect()),
        error_estimates: means.iter().map(|m| m.error_estimate).collect(),
        converged: means.iter().map(|m| m.converged).collect(),
        bound_theorem,
        bound_corollary_refined: corollary.iter().map(|c| c.refined).collect(),
        bound_corollary_special: corollary.iter().map(|c| c.special).collect(),
        ratios,
        fitted_slope,
        corollary_refined_hypothesis: corollary[0].refined_hypothesis,
        corollary_special_hypothesis: corollary[0].special_hypothesis,
    })
}

/// Supremum over one regime at a base grid and its 2× refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSup {
    pub sup: f64,
    pub refined_sup: f64,
    /// `n` and `x` where `sup` is attained.
    pub argmax_n: usize,
    pub argmax_x: f64,
}

impl RegimeSup {
    pub fn is_stable(&self) -> bool {
        self.sup.is_finite()
            && self.refined_sup.is_finite()
            && (self.sup == self.refined_sup || ((self.refined_sup - self.sup) / self.sup).abs() < ENVELOPE_STABILITY)
    }
}

/// Both regimes of a Laguerre envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub regime_a: RegimeSup,
    pub regime_b: RegimeSup,
}

impl EnvelopeReport {
    pub fn is_stable(&self) -> bool {
        self.regime_a.is_stable() && self.regime_b.is_stable()
    }
}

fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 || hi <= lo {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 || hi <= lo {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

fn check_lemma_n(n_values: &[usize]) -> Result<()> {
    if n_values.is_empty() {
        return Err(Error::InvalidParameter("n values must be nonempty".into()));
    }
    if let Some(&n) = n_values.iter().find(|&&n| n == 0 || n > LEMMA_N_MAX) {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: LEMMA_N_MAX,
        });
    }
    Ok(())
}

/// `(sup, argmax_n, argmax_x)` of `exp(log_ratio(n, x))` over `n_values` and
/// the grid returned by `grid(n)`.
fn regime_sup(
    n_values: &[usize],
    grid: &(dyn Fn(usize) -> Vec<f64> + Sync),
    log_ratio: &(dyn Fn(usize, f64) -> Result<f64> + Sync),
) -> Result<(f64, usize, f64)> {
    let per_n = n_values
        .par_iter()
        .map(|&n| -> Result<(f64, usize, f64)> {
            let mut best = (f64::NEG_INFINITY, n, f64::NAN);
            for x in grid(n) {
                let v = log_ratio(n, x)?;
                if v > best.0 {
                    best = (v, n, x);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let best = per_n
        .into_iter()
        .fold((f64::NEG_INFINITY, 0, f64::NAN), |a, b| if b.0 > a.0 { b } else { a });
    Ok((best.0.exp(), best.1, best.2))
}

fn regime(
    n_values: &[usize],
    points: usize,
    grid: &(dyn Fn(usize, usize) -> Vec<f64> + Sync),
    log_ratio: &(dyn Fn(usize, f64) -> Result<f64> + Sync),
) -> Result<RegimeSup> {
    let (sup, argmax_n, argmax_x) = regime_sup(n_values, &|n| grid(n, points), log_ratio)?;
    let (refined_sup, _, _) = regime_sup(n_values, &|n| grid(n, 2 * points - 1), log_ratio)?;
    Ok(RegimeSup {
        sup,
        refined_sup,
        argmax_n,
        argmax_x,
    })
}

/// Envelope of `L_n^{(β)}` near the origin.
///
/// Regime A: `|L_n^{(β)}(x)| / n^β` for `x ∈ [0, c/n]` (linear grid).
/// Regime B: `|L_n^{(β)}(x)| / (x^{-(2β+1)/4} n^{(2β-1)/4})` for
/// `x ∈ [c/n, δ]` (log grid). `points` per regime, refinement `2·points-1`.
pub fn lemma1_envelope(beta: f64, c: f64, delta: f64, n_values: &[usize], points: usize) -> Result<EnvelopeReport> {
    check_lemma_n(n_values)?;
    if !(beta > -1.0) || !(c > 0.0) || !(delta > 0.0) || points < 2 {
        return Err(Error::InvalidParameter(format!(
            "envelope needs β > -1, c > 0, δ > 0 and at least 2 points (got β = {beta}, c = {c}, δ = {delta}, {points} points)"
        )));
    }
    let log_l = |n: usize, x: f64| -> Result<f64> { Ok(laguerre_log_abs(n, beta, x)?.1) };
    let regime_a = regime(
        n_values,
        points,
        &|n, p| linear_grid(0.0, c / n as f64, p),
        &|n, x| Ok(log_l(n, x)? - beta * (n as f64).ln()),
    )?;
    let regime_b = regime(
        n_values,
        points,
        &|n, p| log_grid(c / n as f64, delta.max(c / n as f64), p),
        &|n, x| {
            let scale = -(2.0 * beta + 1.0) / 4.0 * x.ln() + (2.0 * beta - 1.0) / 4.0 * (n as f64).ln();
            Ok(log_l(n, x)? - scale)
        },
    )?;
    Ok(EnvelopeReport { regime_a, regime_b })
}

/// Weighted envelope of `L_n^{(β)}` away from the origin.
///
/// Regime A: `e^{-x/2} x^λ |L_n^{(β)}(x)| / n^{max(λ-1/2, β/2-1/4)}` for
/// `x ∈ [δ, (4-θ)n]`. Regime B: the same with exponent
/// `max(λ-1/3, β/2-1/4)` for `x ∈ [δ, 4n+80]`. Log grids.
pub fn lemma2_envelope(
    beta: f64,
    lambda: f64,
    delta: f64,
    theta: f64,
    n_values: &[usize],
    points: usize,
) -> Result<EnvelopeReport> {
    if !(theta > 0.0 && theta < 4.0) {
        return Err(Error::InvalidParameter(format!("θ must satisfy 0<θ<4 (got θ = {theta})")));
    }
    check_lemma_n(n_values)?;
    if !(beta > -1.0) || !(delta > 0.0) || !lambda.is_finite() || points < 2 {
        return Err(Error::InvalidParameter(format!(
            "envelope needs β > -1, δ > 0, finite λ and at least 2 points (got β = {beta}, λ = {lambda}, δ = {delta}, {points} points)"
        )));
    }
    let weighted = move |n: usize, x: f64, exponent: f64| -> Result<f64> {
        let (_, log_abs) = laguerre_log_abs(n, beta, x)?;
        Ok(-x / 2.0 + lambda * x.ln() + log_abs - exponent * (n as f64).ln())
    };
    let exp_a = (lambda - 0.5).max(beta / 2.0 - 0.25);
    let exp_b = (lambda - 1.0 / 3.0).max(beta / 2.0 - 0.25);
    let regime_a = regime(
        n_values,
        points,
        &|n, p| log_grid(delta, ((4.0 - theta) * n as f64).max(delta), p),
        &|n, x| weighted(n, x, exp_a),
    )?;
    let regime_b = regime(
        n_values,
        points,
        &|n, p| log_grid(delta, 4.0 * n as f64 + 80.0, p),
        &|n, x| weighted(n, x, exp_b),
    )?;
    Ok(EnvelopeReport { regime_a, regime_b })
}

/// Range of `A_n^{(γ)} / (n+1)^γ` over sampled `n`, and monotonicity of
/// `A_n^{(γ)}` over every `n ≤ n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomEnvelope {
    pub gamma: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub refined_min_ratio: f64,
    pub refined_max_ratio: f64,
    /// Nondecreasing for `γ > 0`, nonincreasing for `γ < 0`, constant for `γ = 0`.
    pub monotone: bool,
}

impl BinomEnvelope {
    pub fn is_stable(&self) -> bool {
        let close = |a: f64, b: f64| a.is_finite() && b.is_finite() && ((b - a) / a).abs() < ENVELOPE_STABILITY;
        self.min_ratio > 0.0 && close(self.min_ratio, self.refined_min_ratio) && close(self.max_ratio, self.refined_max_ratio)
    }
}

/// Two-sided envelope `A_n^{(γ)} ≍ (n+1)^γ` for `n ≤ n_max ≤ 100000`.
pub fn lemma3_envelope(gamma: f64, n_max: usize, points: usize) -> Result<BinomEnvelope> {
    if n_max > BINOM_N_MAX {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            max: BINOM_N_MAX,
        });
    }
    if points < 2 {
        return Err(Error::InvalidParameter("binomial envelope needs at least 2 points".into()));
    }
    let log_ratio = |n: usize| -> Result<f64> { Ok(gen_binom(n, gamma)?.log_value - gamma * ((n + 1) as f64).ln()) };
    let sampled = |p: usize| -> Result<(f64, f64)> {
        let mut ns: Vec<usize> = log_grid(1.0, (n_max + 1) as f64, p)
            .into_iter()
            .map(|v| v.round() as usize - 1)
            .collect();
        ns.dedup();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for n in ns {
            let r = log_ratio(n)?;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Ok((lo.exp(), hi.exp()))
    };
    let (min_ratio, max_ratio) = sampled(points)?;
    let (refined_min_ratio, refined_max_ratio) = sampled(2 * points - 1)?;
    let logs = (0..=n_max).map(|n| gen_binom(n, gamma).map(|b| b.log_value)).collect::<Result<Vec<_>>>()?;
    let slack = 1e-12;
    let monotone = logs.windows(2).all(|w| {
        if gamma > 0.0 {
            w[1] >= w[0] - slack
        } else if gamma < 0.0 {
            w[1] <= w[0] + slack
        } else {
            (w[1] - w[0]).abs() <= slack
        }
    });
    Ok(BinomEnvelope {
        gamma,
        min_ratio,
        max_ratio,
        refined_min_ratio,
        refined_max_ratio,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ExpPowerSum;
    use crate::specfun::gen_binom_product;

    fn params(alpha: f64, gamma: f64, eta: f64) -> ExpansionParams {
        ExpansionParams::new(alpha, gamma).unwrap().with_eta(eta).unwrap()
    }

    #[test]
    fn theorem_bound_examples() {
        let p = params(0.0, 1.0, 0.125);
        let w = ModulusFunction::identity();
        assert!((theorem_bound(&w, &p, 1).unwrap() - 2.0).abs() < 1e-15);
        let values: Vec<f64> = (1..=512).map(|n| theorem_bound(&w, &p, n).unwrap()).collect();
        let last_increase = (1..values.len()).rev().find(|&i| values[i] > values[i - 1]).unwrap_or(0);
        assert!(last_increase < 256, "bound still increases at n = {}", last_increase + 1);
        for n in [1, 10, 512] {
            assert_eq!(theorem_bound(&ModulusFunction::zero(), &p, n).unwrap(), 0.0);
        }
        assert!(theorem_bound(&w, &ExpansionParams::new(0.0, 1.0).unwrap(), 3).is_err());
    }

    #[test]
    fn corollary_examples() {
        let p = ExpansionParams::new(0.0, 3.0).unwrap();
        assert_eq!(p.rate_exponent(), -1.25);
        assert_eq!(p.special_eta(), 0.625);
        let p = p.with_eta(0.625).unwrap();
        let w = ModulusFunction::power(0.5).unwrap();
        for n in [1, 7, 512] {
            let c = corollary_bound(&w, &p, n).unwrap();
            assert!((c.special - (n as f64).powf(-5.0 / 16.0)).abs() < 1e-15);
            assert!(c.refined_hypothesis && c.special_hypothesis);
            let z = corollary_bound(&ModulusFunction::zero(), &p, n).unwrap();
            assert_eq!((z.refined, z.special), (0.0, 0.0));
        }
        let c = corollary_bound(&w, &params(0.0, 1.0, 0.125), 4).unwrap();
        assert!(!c.refined_hypothesis && c.special_hypothesis);
    }

    #[test]
    fn slope_fit_recovers_power_laws() {
        let ns = [8, 16, 32, 64, 128];
        let ys: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powf(-0.7)).collect();
        assert!((fit_loglog_slope(&ns, &ys).unwrap() + 0.7).abs() < 1e-12);
        assert!(fit_loglog_slope(&ns, &[0.0; 5]).is_none());
        assert!(fit_loglog_slope(&[4], &[1.0]).is_none());
    }

    #[test]
    fn schedules() {
        let s = log_spaced_n(8, 512, 16).unwrap();
        assert_eq!(s.len(), 16);
        assert_eq!((s[0], s[15]), (8, 512));
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(log_spaced_n(1, 3, 10).unwrap(), vec![1, 2, 3]);
        assert!(log_spaced_n(0, 3, 2).is_err());
    }

    #[test]
    fn sweep_examples() {
        let w = ModulusFunction::identity();
        let p = params(0.0, 1.0, 0.125);
        let c = deviation_sweep(&ExpPowerSum::constant(2.0), 2.0, &w, &p, &[1, 4, 16, 64], Method::Both, 1e-12).unwrap();
        assert!(c.deviations.iter().all(|&d| d <= 1e-8));
        assert!(c.fitted_slope.is_none());

        let ns = log_spaced_n(1, 512, 20).unwrap();
        let r = deviation_sweep(&ExpPowerSum::exponential(0.5), 1.0, &w, &p, &ns, Method::Both, 1e-12).unwrap();
        for (&n, &d) in ns.iter().zip(&r.deviations) {
            // Cesàro mean of S_k = 1 - 3^{-(k+1)} with weights A_{n-k}^{(0)} / A_n^{(1)} = 1/(n+1).
            let mean: f64 = (0..=n).map(|k| 1.0 - 3f64.powi(-(k as i32 + 1))).sum::<f64>()
                / gen_binom_product(n, 1.0);
            assert!((d - (1.0 - mean).abs()).abs() < 1e-8, "n={n}");
        }
        let kernel = r.deviations_kernel.as_ref().unwrap();
        for (a, b) in r.deviations.iter().zip(kernel) {
            assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-300) + 1e-12);
        }
        assert!(deviation_sweep(&ExpPowerSum::constant(1.0), 1.0, &w, &p, &[4, 2], Method::Kernel, 1e-12).is_err());
        assert!(deviation_sweep(&ExpPowerSum::constant(1.0), 1.0, &w, &p, &[4, 600], Method::Kernel, 1e-12).is_err());
    }

    #[test]
    fn example_two_rate() {
        let p = params(0.0, 3.0, 0.625);
        let w = ModulusFunction::power(0.5).unwrap();
        let ns = log_spaced_n(16, 512, 12).unwrap();
        let r = deviation_sweep(&ExpPowerSum::power(0.5), 0.0, &w, &p, &ns, Method::Kernel, 1e-12).unwrap();
        assert!(r.fitted_slope.unwrap() <= -5.0 / 16.0 + 0.1);
        assert!(r.deviations.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn lemma1_closed_forms() {
        let ns = [1, 2, 5, 50, 500];
        let e = lemma1_envelope(0.0, 1.0, 1.0, &ns, 50).unwrap();
        assert!((e.regime_a.sup - 1.0).abs() < 1e-12);
        let e = lemma1_envelope(1.0, 1.0, 1.0, &ns, 50).unwrap();
        assert!((e.regime_a.sup - 2.0).abs() < 1e-12);
        assert_eq!((e.regime_a.argmax_n, e.regime_a.argmax_x), (1, 0.0));
        assert!(lemma1_envelope(0.0, 1.0, 1.0, &[2001], 10).is_err());
    }

    #[test]
    fn lemma2_rejects_theta_outside_window() {
        let err = lemma2_envelope(0.0, 0.0, 1.0, 5.0, &[4], 10).unwrap_err().to_string();
        assert!(err.contains("0<θ<4"), "{err}");
    }

    #[test]
    fn lemma3_matches_known_ratios() {
        // A_n^{(1)} = n+1 exactly.
        let e = lemma3_envelope(1.0, 1000, 50).unwrap();
        assert!((e.min_ratio - 1.0).abs() < 1e-12 && (e.max_ratio - 1.0).abs() < 1e-12);
        assert!(e.monotone && e.is_stable());
        let e = lemma3_envelope(-0.5, 100_000, 100).unwrap();
        assert!(e.monotone && e.is_stable() && e.min_ratio > 0.5 && e.max_ratio <= 1.0 + 1e-12);
        assert!(lemma3_envelope(0.5, 100_001, 10).is_err());
    }
}
