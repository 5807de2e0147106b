//! Modulus-of-continuity-type functions and numerical checks of the two
//! hypotheses on `Δ₀f` behind the rate at the origin.
//!
//! Growth condition (small `u`):
//!
//! ```text
//! F_α(u) = u^{-(α+1)}/Γ(α+1) ∫₀^u e^{-t/2} t^α |Δ₀f(t)| dt = O(ω(u)),   u > 0
//! ```
//!
//! Tail condition (large `u`):
//!
//! ```text
//! 1/Γ(α+1) ∫_u^∞ e^{-t/2} t^{α-γ-1/3} |Δ₀f(t)| dt = O(ω(1/u)),   u ≥ 1
//! ```
//!
//! Both checkers report the supremum of the left side divided by the
//! modulus over a log grid together with the supremum on a grid twice as
//! fine.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::function::WeightedFunction;
use crate::quadrature::{integrate_tail, refine_vec, RuleKind};
use crate::specfun::log_gamma;
use crate::{Error, Result};

/// Node count of the first rule used for `F_α`.
pub const F_START_NODES: usize = 64;
const F_RTOL: f64 = 1e-12;
const TAIL_RTOL: f64 = 1e-9;
/// Below this both sides of a `0/0` ratio count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-14;
/// Largest relative change of a supremum under 2× grid refinement that still
/// counts as stable.
pub const GRID_STABILITY: f64 = 0.2;

/// A nondecreasing, subadditive `ω` on `[0, ∞)` with `ω(0) = 0`.
#[derive(Clone)]
pub struct ModulusFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
}

impl fmt::Debug for ModulusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulusFunction").field("label", &self.label).finish()
    }
}

impl ModulusFunction {
    /// Wraps `ω` without checking it; see [`ModulusFunction::check_axioms`].
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            label: label.into(),
        }
    }

    /// `ω(t) = t`.
    pub fn identity() -> Self {
        Self::new("omega(t)=t", |t| t)
    }

    /// `ω(t) = t^δ`, `0 < δ ≤ 1`.
    pub fn power(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ω(t) = t^δ needs 0 < δ ≤ 1 (got δ = {delta})"
            )));
        }
        Ok(Self::new(format!("omega(t)=t^{delta}"), move |t: f64| t.powf(delta)))
    }

    /// `ω ≡ 0`.
    pub fn zero() -> Self {
        Self::new("omega(t)=0", |_| 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Checks `ω(0) = 0`, monotonicity on 200 log-spaced points of
    /// `[1e-6, 10]` and subadditivity (to `1e-12`) on a 50×50 grid.
    pub fn check_axioms(&self) -> Result<()> {
        let at_zero = self.eval(0.0);
        if at_zero != 0.0 {
            return Err(Error::InvalidParameter(format!("{}: ω(0) = {at_zero}, expected 0", self.label)));
        }
        let grid = LogGrid::new(1e-6, 10.0, 200)?.points();
        let values: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        if let Some(bad) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{}: ω({}) = {} is not a finite non-negative value",
                self.label, grid[bad], values[bad]
            )));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(format!(
                "{}: not nondecreasing between t = {} and t = {}",
                self.label,
                grid[i],
                grid[i + 1]
            )));
        }
        let sample = LogGrid::new(1e-6, 10.0, 50)?.points();
        for &a in &sample {
            for &b in &sample {
                if self.eval(a + b) > self.eval(a) + self.eval(b) + 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "{}: ω({a} + {b}) > ω({a}) + ω({b})",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `points` log-spaced values on `[lo, hi]`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || points == 0 || (points == 1 && hi != lo) {
            return Err(Error::InvalidParameter(format!(
                "log grid needs 0 < lo ≤ hi and enough points (got [{lo}, {hi}] with {points})"
            )));
        }
        Ok(Self { lo, hi, points })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let step = (b - a) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| match i {
                0 => self.lo,
                i if i == self.points - 1 => self.hi,
                i => (a + step * i as f64).exp(),
            })
            .collect()
    }

    /// The grid with every gap halved; contains all current points.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points - 1,
            ..*self
        }
    }
}

impl fmt::Display for LogGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} log-spaced points on [{:e}, {:e}]", self.points, self.lo, self.hi)
    }
}

/// Outcome of a condition check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Supremum of the ratio over `grid` (`inf` on a violated `0/0`).
    pub sup_ratio: f64,
    pub argmax_u: f64,
    pub grid: LogGrid,
    /// Supremum over `grid.refined()`.
    pub refined_sup_ratio: f64,
    /// Finite supremum that moved by less than [`GRID_STABILITY`] under refinement.
    pub passed: bool,
}

/// `Δ₀f(t) = f(t) - f0` for `t ≥ 0`.
pub fn delta0(f: &dyn WeightedFunction, f0: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain {
            what: "Δ₀f(t) needs t ≥ 0",
            value: t,
        });
    }
    Ok(f.delta0(t, f0))
}

/// `F_α(y) = y^{-(α+1)}/Γ(α+1) ∫₀^y e^{-u/2} u^α |Δ₀f(u)| du`.
///
/// With `u = y v` this is `1/Γ(α+1) ∫₀^1 v^α e^{-yv/2} |Δ₀f(yv)| dv`. The
/// factor `v^{α+s}`, where `s` is the known vanishing order of `Δ₀f` at the
/// origin, is absorbed into a Gauss–Jacobi rule on `[0, 1]` so the endpoint
/// behaviour costs nothing. The rule starts at 64 nodes and doubles while the
/// value still moves.
pub fn averaged_modulus_f(f: &dyn WeightedFunction, f0: f64, alpha: f64, y: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain {
            what: "α must satisfy α > -1",
            value: alpha,
        });
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain {
            what: "F_α(y) needs y > 0",
            value: y,
        });
    }
    let s = f.delta0_order(f0);
    let out = refine_vec(RuleKind::UnitJacobi, alpha + s, F_START_NODES, 1, F_RTOL, |v, buf| {
        let u = y * v;
        let scaled = if s > 0.0 {
            f.delta0(u, f0).abs() * y.powf(s) / u.powf(s)
        } else {
            f.delta0(u, f0).abs()
        };
        buf[0] = (-0.5 * u).exp() * scaled;
        Ok(())
    })?;
    Ok(out.values[0] / log_gamma(alpha + 1.0)?.exp())
}

fn sup_over(grid: &LogGrid, ratio: &dyn Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut best = (0.0, grid.lo);
    for u in grid.points() {
        let r = ratio(u)?;
        if r.is_nan() || r > best.0 {
            best = (if r.is_nan() { f64::INFINITY } else { r }, u);
            if !best.0.is_finite() {
                break;
            }
        }
    }
    Ok(best)
}

fn ratio_or_violation(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num.abs() < ZERO_THRESHOLD {
        0.0
    } else {
        f64::INFINITY
    }
}

fn report(grid: LogGrid, ratio: &dyn Fn(f64) -> Result<f64>) -> Result<ConditionReport> {
    let (sup, arg) = sup_over(&grid, ratio)?;
    let (refined, _) = sup_over(&grid.refined(), ratio)?;
    let stable = if sup == 0.0 {
        refined == 0.0
    } else {
        ((refined - sup) / sup).abs() < GRID_STABILITY
    };
    Ok(ConditionReport {
        sup_ratio: sup,
        argmax_u: arg,
        grid,
        refined_sup_ratio: refined,
        passed: sup.is_finite() && refined.is_finite() && stable,
    })
}

/// Default grid of the growth check: 100 points on `[1e-6, 10]`.
pub fn default_growth_grid() -> LogGrid {
    LogGrid {
        lo: 1e-6,
        hi: 10.0,
        points: 100,
    }
}

/// Default grid of the tail check: 64 points on `[1, 32]`.
pub fn default_tail_grid() -> LogGrid {
    LogGrid {
        lo: 1.0,
        hi: 32.0,
        points: 64,
    }
}

/// Supremum of `F_α(u) / ω(u)` over `grid ⊂ (0, 10]`.
pub fn check_condition_growth(
    f: &dyn WeightedFunction,
    f0: f64,
    alpha: f64,
    omega: &ModulusFunction,
    grid: LogGrid,
) -> Result<ConditionReport> {
    if grid.hi > 10.0 {
        return Err(Error::InvalidParameter(format!(
            "growth grid must lie in (0, 10] (got upper end {})",
            grid.hi
        )));
    }
    report(grid, &|u| Ok(ratio_or_violation(averaged_modulus_f(f, f0, alpha, u)?, omega.eval(u))))
}

/// Supremum of `[1/Γ(α+1) ∫_u^∞ e^{-t/2} t^{α-γ-1/3} |Δ₀f(t)| dt] / ω(1/u)`
/// over `grid ⊂ [1, ∞)`.
pub fn check_condition_tail(
    f: &dyn WeightedFunction,
    f0: f64,
    alpha: f64,
    gamma: f64,
    omega: &ModulusFunction,
    grid: LogGrid,
) -> Result<ConditionReport> {
    if grid.lo < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "tail grid must lie in [1, ∞) (got lower end {})",
            grid.lo
        )));
    }
    let norm = log_gamma(alpha + 1.0)?.exp();
    let power = alpha - gamma - 1.0 / 3.0;
    report(grid, &|u| {
        let tail = integrate_tail(u, |t| t.powf(power) * f.delta0(t, f0).abs(), TAIL_RTOL)?;
        Ok(ratio_or_violation(tail.value / norm, omega.eval(1.0 / u)))
    })
}
