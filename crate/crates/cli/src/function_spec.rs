//! The built-in function family and its pairing with a modulus.

use laguerre_cesaro::conditions::ModulusFunction;
use laguerre_cesaro::function::ExpPowerSum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Deepest allowed nesting of linear combinations.
pub const MAX_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FunctionSpec {
    /// `e^{-t/2}`, paired with `ω(t) = t`.
    F1,
    /// `t^δ`, `0 < δ ≤ 1`, paired with `ω(t) = t^δ`.
    F2 { delta: f64 },
    /// `c`, paired with `ω ≡ 0`.
    Constant { c: f64 },
    /// `Σ c_i f_i`, paired with `Σ |c_i| ω_i`.
    LinearCombo { combo: Vec<(f64, FunctionSpec)> },
}

impl FunctionSpec {
    /// Parses `f1`, `f2` (with the given `δ`) or `const:<c>`.
    pub fn parse(name: &str, delta: f64) -> CliResult<Self> {
        let spec = match name {
            "f1" => FunctionSpec::F1,
            "f2" => FunctionSpec::F2 { delta },
            other => match other.strip_prefix("const:") {
                Some(c) => FunctionSpec::Constant {
                    c: c.trim()
                        .parse()
                        .map_err(|_| CliError::Validation(format!("cannot parse constant in {other:?}")))?,
                },
                None => {
                    return Err(CliError::Validation(format!(
                        "function must be f1, f2 or const:<c> (got {other:?})"
                    )))
                }
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    fn depth(&self) -> usize {
        match self {
            FunctionSpec::LinearCombo { combo } => 1 + combo.iter().map(|(_, f)| f.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.depth() > MAX_DEPTH {
            return Err(CliError::Validation(format!(
                "linear combinations may nest at most {MAX_DEPTH} deep"
            )));
        }
        self.validate_leaves()
    }

    fn validate_leaves(&self) -> CliResult<()> {
        match self {
            FunctionSpec::F1 => Ok(()),
            FunctionSpec::F2 { delta } if *delta > 0.0 && *delta <= 1.0 => Ok(()),
            FunctionSpec::F2 { delta } => Err(CliError::Validation(format!(
                "f2 needs 0 < δ ≤ 1 (got δ = {delta})"
            ))),
            FunctionSpec::Constant { c } if c.is_finite() => Ok(()),
            FunctionSpec::Constant { c } => Err(CliError::Validation(format!("constant must be finite (got {c})"))),
            FunctionSpec::LinearCombo { combo } => {
                if combo.is_empty() {
                    return Err(CliError::Validation("linear combination must have at least one term".into()));
                }
                for (c, f) in combo {
                    if !c.is_finite() {
                        return Err(CliError::Validation(format!(
                            "combination coefficients must be finite (got {c})"
                        )));
                    }
                    f.validate_leaves()?;
                }
                Ok(())
            }
        }
    }

    pub fn build(&self) -> ExpPowerSum {
        match self {
            FunctionSpec::F1 => ExpPowerSum::exponential(0.5),
            FunctionSpec::F2 { delta } => ExpPowerSum::power(*delta),
            FunctionSpec::Constant { c } => ExpPowerSum::constant(*c),
            FunctionSpec::LinearCombo { combo } => {
                let parts: Vec<(f64, ExpPowerSum)> = combo.iter().map(|(c, f)| (*c, f.build())).collect();
                ExpPowerSum::linear_combination(&parts)
            }
        }
    }

    /// `f(0)`, the continuous extension at the origin.
    pub fn f0(&self) -> f64 {
        self.build().value_at_zero()
    }

    pub fn omega(&self) -> ModulusFunction {
        match self {
            FunctionSpec::F1 => ModulusFunction::identity(),
            FunctionSpec::F2 { delta } => {
                ModulusFunction::power(*delta).expect("δ validated before the modulus is built")
            }
            FunctionSpec::Constant { .. } => ModulusFunction::zero(),
            FunctionSpec::LinearCombo { combo } => {
                let parts: Vec<(f64, ModulusFunction)> = combo.iter().map(|(c, f)| (c.abs(), f.omega())).collect();
                let label = parts
                    .iter()
                    .map(|(c, w)| format!("{c}*[{}]", w.label()))
                    .collect::<Vec<_>>()
                    .join(" + ");
                ModulusFunction::new(label, move |t| parts.iter().map(|(c, w)| c * w.eval(t)).sum())
            }
        }
    }

    /// Upper end of the admissible `γ` range of the worked examples, with the
    /// inequality as text.
    pub fn example_window(&self, alpha: f64) -> Option<(f64, String)> {
        match self {
            FunctionSpec::F1 => Some((alpha + 8.0 / 3.0, "α + 1/2 < γ < α + 8/3".to_string())),
            FunctionSpec::F2 { delta } => Some((
                alpha + 2.0 * delta + 2.0 / 3.0,
                "α + 1/2 < γ < α + 2δ + 2/3".to_string(),
            )),
            _ => None,
        }
    }
}
