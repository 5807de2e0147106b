//! Functions integrable against `e^{-t} t^α` on `[0, ∞)`.
//!
//! Any callable can be wrapped with [`FnFunction`]. The built-in example
//! family is represented exactly as a finite sum `Σ c_j t^{s_j} e^{-r_j t}`
//! ([`ExpPowerSum`]); integrals of such sums against `e^{-t} t^α · P(t)` with a
//! polynomial `P` are then evaluated term by term with a rule of exponent
//! `α + s_j` after rescaling by `1 + r_j`, which is exact once the rule has
//! enough nodes.

use serde::{Deserialize, Serialize};

/// A real function on `[0, ∞)` with `∫ e^{-t} t^α |f(t)| dt < ∞`.
pub trait WeightedFunction: Send + Sync {
    fn eval(&self, t: f64) -> f64;

    /// `f(t) - f0`. Implementations may override this to avoid cancellation
    /// near `t = 0`.
    fn delta0(&self, t: f64, f0: f64) -> f64 {
        self.eval(t) - f0
    }

    /// An exponent `s ≥ 0` such that `|f(t) - f0| / t^s` stays bounded and
    /// smooth near `t = 0`. Zero when nothing is known.
    fn delta0_order(&self, _f0: f64) -> f64 {
        0.0
    }

    /// Exact decomposition into `c t^s e^{-r t}` terms, when available.
    fn exp_power_terms(&self) -> Option<&[ExpPowerTerm]> {
        None
    }

    fn label(&self) -> String {
        "callable".to_string()
    }
}

/// Wraps a closure as a [`WeightedFunction`].
pub struct FnFunction<F> {
    f: F,
    label: String,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FnFunction<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self { f, label: label.into() }
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> WeightedFunction for FnFunction<F> {
    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `coeff · t^power · e^{-rate·t}` with `power ≥ 0`, `rate ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpPowerTerm {
    pub coeff: f64,
    pub power: f64,
    pub rate: f64,
}

impl ExpPowerTerm {
    pub fn eval(&self, t: f64) -> f64 {
        let p = if self.power == 0.0 { 1.0 } else { t.powf(self.power) };
        self.coeff * p * (-self.rate * t).exp()
    }
}

/// A finite sum of [`ExpPowerTerm`]s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpPowerSum {
    terms: Vec<ExpPowerTerm>,
    label: String,
}

impl ExpPowerSum {
    /// # Panics
    /// If a term has a negative or non-finite power or rate, or a non-finite
    /// coefficient.
    pub fn new(terms: Vec<ExpPowerTerm>, label: impl Into<String>) -> Self {
        for t in &terms {
            assert!(t.coeff.is_finite(), "coefficient must be finite");
            assert!(t.power >= 0.0 && t.power.is_finite(), "power must be ≥ 0");
            assert!(t.rate >= 0.0 && t.rate.is_finite(), "rate must be ≥ 0");
        }
        Self {
            terms,
            label: label.into(),
        }
    }

    /// `e^{-rate·t}`; `rate = 1/2` is the first worked example.
    pub fn exponential(rate: f64) -> Self {
        let label = if rate == 0.5 {
            "f1(t)=exp(-t/2)".to_string()
        } else {
            format!("exp(-{rate}t)")
        };
        Self::new(vec![ExpPowerTerm { coeff: 1.0, power: 0.0, rate }], label)
    }

    /// `t^δ`.
    pub fn power(delta: f64) -> Self {
        Self::new(
            vec![ExpPowerTerm {
                coeff: 1.0,
                power: delta,
                rate: 0.0,
            }],
            format!("f2(t)=t^{delta}"),
        )
    }

    pub fn constant(c: f64) -> Self {
        Self::new(
            vec![ExpPowerTerm {
                coeff: c,
                power: 0.0,
                rate: 0.0,
            }],
            format!("const {c}"),
        )
    }

    /// `Σ c_i f_i`.
    pub fn linear_combination(parts: &[(f64, ExpPowerSum)]) -> Self {
        let terms = parts
            .iter()
            .flat_map(|(c, f)| {
                f.terms.iter().map(move |t| ExpPowerTerm {
                    coeff: c * t.coeff,
                    ..*t
                })
            })
            .collect();
        let label = parts
            .iter()
            .map(|(c, f)| format!("{c}*[{}]", f.label))
            .collect::<Vec<_>>()
            .join(" + ");
        Self::new(terms, label)
    }

    pub fn terms(&self) -> &[ExpPowerTerm] {
        &self.terms
    }

    /// Value at `t = 0` (the sum of pure-exponential coefficients).
    pub fn value_at_zero(&self) -> f64 {
        self.terms.iter().filter(|t| t.power == 0.0).map(|t| t.coeff).sum()
    }
}

impl WeightedFunction for ExpPowerSum {
    fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    fn delta0(&self, t: f64, f0: f64) -> f64 {
        let mut sum = self.value_at_zero() - f0;
        for term in &self.terms {
            if term.power == 0.0 {
                sum += term.coeff * (-term.rate * t).exp_m1();
            } else {
                sum += term.eval(t);
            }
        }
        sum
    }

    fn delta0_order(&self, f0: f64) -> f64 {
        if self.value_at_zero() != f0 {
            return 0.0;
        }
        let order = self
            .terms
            .iter()
            .filter(|t| t.coeff != 0.0)
            .filter_map(|t| match (t.power, t.rate) {
                (p, _) if p > 0.0 => Some(p),
                (_, r) if r > 0.0 => Some(1.0),
                _ => None,
            })
            .fold(f64::INFINITY, f64::min);
        if order.is_finite() {
            order
        } else {
            0.0
        }
    }

    fn exp_power_terms(&self) -> Option<&[ExpPowerTerm]> {
        Some(&self.terms)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
