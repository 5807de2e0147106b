//! Fourier–Laguerre expansions and their Cesàro `(C, γ)` means.
//!
//! The crate evaluates generalized Laguerre polynomials, builds generalized
//! Gauss–Laguerre rules, computes Fourier–Laguerre coefficients of functions
//! integrable against `e^{-t} t^α`, and forms `(C, γ)` means of the partial
//! sums. At the origin the means collapse to a single integral against
//! `L_n^{(α+γ+1)}`, which gives an independent second route used throughout
//! the test-suite.
//!
//! On top of this sit numerical checkers for the modulus-of-continuity
//! conditions that drive pointwise approximation rates at `x = 0`
//! ([`conditions`]) and sweep/bound machinery for rate experiments
//! ([`ratelab`]).
//!
//! ```
//! use laguerre_cesaro::expansion::{cesaro_mean_kernel_at_zero, ExpansionParams};
//! use laguerre_cesaro::function::ExpPowerSum;
//!
//! let f1 = ExpPowerSum::exponential(0.5);
//! let params = ExpansionParams::new(0.0, 1.0).unwrap();
//! let mean = cesaro_mean_kernel_at_zero(&f1, &params, 2, 1e-12).unwrap();
//! assert!((mean.value - 68.0 / 81.0).abs() < 1e-10);
//! ```

pub mod conditions;
pub mod error;
pub mod expansion;
pub mod function;
pub mod quadrature;
pub mod ratelab;
pub mod specfun;
mod tridiag;

pub use error::{Error, Result};
