use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("{what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    /// A parameter set violates a documented inequality. The message quotes it.
    #[error("{0}")]
    InvalidParameter(String),

    /// A Laguerre recurrence left the representable range of `f64`.
    #[error("L_{n}^({beta})({x}) overflows f64")]
    Overflow { n: usize, beta: f64, x: f64 },

    /// The tridiagonal eigen-iteration exhausted its sweep budget.
    #[error("QL iteration failed to converge for eigenvalue {index} within {budget} sweeps")]
    NoConvergence { index: usize, budget: usize },

    /// An integrand returned NaN or an infinity at a quadrature node.
    #[error("integrand is not finite at node {node}")]
    NonFiniteIntegrand { node: f64 },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    /// Kernel and direct evaluations of the same Cesaro mean disagree.
    #[error("direct and kernel paths disagree at n = {n}: {direct} vs {kernel}")]
    MethodMismatch { n: usize, direct: f64, kernel: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
