//! Gaussian rules for `∫₀^∞ y^α e^{-y} g(y) dy` (generalized Gauss–Laguerre)
//! and `∫₀¹ v^α g(v) dv` (shifted Gauss–Jacobi), both synthesized by
//! Golub–Welsch from their Jacobi matrices.
//!
//! Integration never evaluates the integrand at a node whose weight has
//! underflowed to zero, so rules with several hundred nodes can be used with
//! integrands (such as `L_n`) that overflow far out on the half-line.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::specfun::log_gamma;
use crate::tridiag::eigen_first_components;
use crate::{Error, Result};

/// Largest supported node count.
pub const MAX_NODES: usize = 512;
/// First rule size tried by [`integrate_refined`].
pub const REFINE_START: usize = 32;

const RTOL_MIN: f64 = 1e-13;
const RTOL_MAX: f64 = 1e-3;
/// Rounding floor, in units of `ε · Σ w|g|`, below which changes between
/// successive rules count as converged.
/// Default rounding allowance of the stopping test, in units of `ε·Σw|g|`.
pub const ROUNDING_FLOOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    /// Weight `y^α e^{-y}` on `[0, ∞)`.
    Laguerre,
    /// Weight `v^α` on `[0, 1]`.
    UnitJacobi,
}

/// Nodes (ascending) and weights of a Gaussian rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn zeroth_moment(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn check_rule_args(m: usize, alpha: f64) -> Result<()> {
    if m == 0 || m > MAX_NODES {
        return Err(Error::Domain {
            what: "node count must satisfy 1 ≤ m ≤ 512",
            value: m as f64,
        });
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            what: "weight exponent must satisfy α > -1",
            value: alpha,
        });
    }
    Ok(())
}

/// The `m`-point generalized Gauss–Laguerre rule for weight `y^α e^{-y}`.
///
/// Nodes are the eigenvalues of the Jacobi matrix with diagonal `2k+α+1`
/// and off-diagonal `sqrt(k(k+α))`; weights are `Γ(α+1)` times the squared
/// first eigenvector components.
pub fn gauss_laguerre_rule(m: usize, alpha: f64) -> Result<QuadratureRule> {
    check_rule_args(m, alpha)?;
    let diag: Vec<f64> = (0..m).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..m)
        .map(|k| {
            let k = k as f64;
            (k * (k + alpha)).sqrt()
        })
        .collect();
    let mu0 = log_gamma(alpha + 1.0)?.exp();
    let pairs = eigen_first_components(&diag, &off)?;
    let (nodes, weights) = pairs.into_iter().map(|(x, z2)| (x, mu0 * z2)).unzip();
    Ok(QuadratureRule {
        kind: RuleKind::Laguerre,
        alpha,
        nodes,
        weights,
    })
}

/// The `m`-point Gauss–Jacobi rule for weight `v^α` on `[0, 1]`.
///
/// Built from the Jacobi matrix of the `(0, α)` Jacobi polynomials on
/// `[-1, 1]` and mapped by `v = (1+x)/2`; for `α = 0` this is Gauss–Legendre.
pub fn gauss_jacobi_unit_rule(m: usize, alpha: f64) -> Result<QuadratureRule> {
    check_rule_args(m, alpha)?;
    let b = alpha;
    let diag: Vec<f64> = (0..m)
        .map(|k| {
            if k == 0 {
                b / (b + 2.0)
            } else {
                let s = 2.0 * k as f64 + b;
                b * b / (s * (s + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..m)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + b;
            2.0 * k * (k + b) / (s * ((s + 1.0) * (s - 1.0)).sqrt())
        })
        .collect();
    let pairs = eigen_first_components(&diag, &off)?;
    let (nodes, weights) = pairs
        .into_iter()
        .map(|(x, z2)| (0.5 * (1.0 + x), z2 / (alpha + 1.0)))
        .unzip();
    Ok(QuadratureRule {
        kind: RuleKind::UnitJacobi,
        alpha,
        nodes,
        weights,
    })
}

type RuleKey = (RuleKind, u64, usize);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Process-wide memoized rule construction.
pub fn cached_rule(kind: RuleKind, m: usize, alpha: f64) -> Result<Arc<QuadratureRule>> {
    let key = (kind, alpha.to_bits(), m);
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(match kind {
        RuleKind::Laguerre => gauss_laguerre_rule(m, alpha)?,
        RuleKind::UnitJacobi => gauss_jacobi_unit_rule(m, alpha)?,
    });
    rule_cache().lock().unwrap().insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// `Σ w_i g(x_i)`, skipping nodes whose weight underflowed to zero.
pub fn integrate_weighted(rule: &QuadratureRule, g: impl Fn(f64) -> f64) -> Result<f64> {
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w == 0.0 {
            continue;
        }
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// Result of a doubling refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refined {
    pub value: f64,
    /// Change between the last two rules relative to `Σ w|g|`.
    pub achieved_rtol: f64,
    /// Absolute change between the last two rules (`inf` if only one rule ran).
    pub error_estimate: f64,
    pub converged: bool,
    /// Node count of the last rule used.
    pub nodes: usize,
}

/// Component-wise version of [`Refined`].
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedVec {
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
    /// Largest `Σ w_i |g_k(x_i)|` over the rules used, the rounding scale of the sum.
    pub abs_mass: Vec<f64>,
    pub converged: Vec<bool>,
    pub nodes: usize,
}

impl RefinedVec {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn achieved_rtol(&self, k: usize) -> f64 {
        if self.abs_mass[k] > 0.0 {
            self.error_estimates[k] / self.abs_mass[k]
        } else {
            0.0
        }
    }

    fn component(&self, k: usize) -> Refined {
        Refined {
            value: self.values[k],
            achieved_rtol: self.achieved_rtol(k),
            error_estimate: self.error_estimates[k],
            converged: self.converged[k],
            nodes: self.nodes,
        }
    }
}

fn check_rtol(rtol: f64) -> Result<()> {
    if !(RTOL_MIN..=RTOL_MAX).contains(&rtol) {
        return Err(Error::Domain {
            what: "rtol must lie in [1e-13, 1e-3]",
            value: rtol,
        });
    }
    Ok(())
}

fn apply_rule(
    rule: &QuadratureRule,
    dim: usize,
    g: &impl Fn(f64, &mut [f64]) -> Result<()>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut sums = vec![0.0; dim];
    let mut mass = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w == 0.0 {
            continue;
        }
        g(x, &mut buf)?;
        for k in 0..dim {
            let v = buf[k];
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: x });
            }
            sums[k] += w * v;
            mass[k] += w * v.abs();
        }
    }
    Ok((sums, mass))
}

/// Integrates a vector-valued `g` against a rule family with doubling node
/// counts starting at `m_start`, until every component changes by at most
/// `rtol·|I| + 64ε·Σw|g|` or [`MAX_NODES`] has been used.
///
/// `g(x, out)` writes all components at `x`; one call per node keeps shared
/// work (for instance a Laguerre recurrence) in a single pass.
pub fn refine_vec(
    kind: RuleKind,
    alpha: f64,
    m_start: usize,
    dim: usize,
    rtol: f64,
    g: impl Fn(f64, &mut [f64]) -> Result<()>,
) -> Result<RefinedVec> {
    refine_vec_with_floor(kind, alpha, m_start, dim, rtol, ROUNDING_FLOOR, g)
}

/// [`refine_vec`] with the rounding allowance `floor_ulps·ε·Σw|g|` chosen by
/// the caller, for integrands whose evaluation itself carries more than a
/// few ulps of error (high-degree recurrences).
pub fn refine_vec_with_floor(
    kind: RuleKind,
    alpha: f64,
    m_start: usize,
    dim: usize,
    rtol: f64,
    floor_ulps: f64,
    g: impl Fn(f64, &mut [f64]) -> Result<()>,
) -> Result<RefinedVec> {
    check_rtol(rtol)?;
    let mut m = m_start.clamp(1, MAX_NODES);
    let rule = cached_rule(kind, m, alpha)?;
    let (mut prev, mut mass) = apply_rule(&rule, dim, &g)?;
    let mut errors = vec![f64::INFINITY; dim];
    let mut converged = vec![false; dim];
    while m < MAX_NODES {
        m = (2 * m).min(MAX_NODES);
        let rule = cached_rule(kind, m, alpha)?;
        let (cur, mut cur_mass) = apply_rule(&rule, dim, &g)?;
        for k in 0..dim {
            // The nodes of one rule can sit on the zeros of the integrand (a
            // Laguerre polynomial of the rule's own degree), so the rounding
            // scale is taken from whichever rule saw the larger magnitudes.
            cur_mass[k] = cur_mass[k].max(mass[k]);
            let diff = (cur[k] - prev[k]).abs();
            errors[k] = diff;
            converged[k] = diff <= rtol * cur[k].abs() + floor_ulps * f64::EPSILON * cur_mass[k];
        }
        prev = cur;
        mass = cur_mass;
        if converged.iter().all(|&c| c) {
            break;
        }
    }
    Ok(RefinedVec {
        values: prev,
        error_estimates: errors,
        abs_mass: mass,
        converged,
        nodes: m,
    })
}

/// `∫₀^∞ y^α e^{-y} g(y) dy` with Gauss–Laguerre rules of 32, 64, …, 512
/// nodes, stopping once two successive values agree to `rtol`.
///
/// Non-convergence at 512 nodes is not an error: the last value is returned
/// with `converged == false`.
pub fn integrate_refined(alpha: f64, g: impl Fn(f64) -> f64, rtol: f64) -> Result<Refined> {
    integrate_refined_from(alpha, REFINE_START, g, rtol)
}

/// [`integrate_refined`] with an explicit starting node count.
pub fn integrate_refined_from(alpha: f64, m_start: usize, g: impl Fn(f64) -> f64, rtol: f64) -> Result<Refined> {
    let out = refine_vec(RuleKind::Laguerre, alpha, m_start, 1, rtol, |x, buf| {
        buf[0] = g(x);
        Ok(())
    })?;
    Ok(out.component(0))
}

/// `∫_u^∞ e^{-t/2} ψ(t) dt` for `ψ` of at most polynomial growth.
///
/// Substitutes `t = u + 2s`, giving `2 e^{-u/2} ∫₀^∞ e^{-s} ψ(u+2s) ds`,
/// which is evaluated with [`integrate_refined`] at `α = 0`.
pub fn integrate_tail(u: f64, psi: impl Fn(f64) -> f64, rtol: f64) -> Result<Refined> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::Domain {
            what: "tail integral requires a finite u ≥ 0",
            value: u,
        });
    }
    let inner = integrate_refined(0.0, |s| psi(u + 2.0 * s), rtol)?;
    let scale = 2.0 * (-0.5 * u).exp();
    Ok(Refined {
        value: scale * inner.value,
        error_estimate: scale * inner.error_estimate,
        ..inner
    })
}
