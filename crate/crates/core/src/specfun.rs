//! Scalar special functions: `ln Γ`, generalized binomial coefficients
//! `A_n^{(γ)} = binom(n+γ, n)` and generalized Laguerre polynomials.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Above this index `gen_binom` works in the log domain.
pub const GEN_BINOM_DIRECT_MAX: usize = 64;

/// `ζ(k)` for `k = 2..=40`, the Taylor coefficients of `ln Γ(1+z)`.
const ZETA: [f64; 39] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
    1.000_000_000_465_662_9,
    1.000_000_000_232_831_2,
    1.000_000_000_116_415_5,
    1.000_000_000_058_207_7,
    1.000_000_000_029_103_9,
    1.000_000_000_014_551_9,
    1.000_000_000_007_276,
    1.000_000_000_003_638,
    1.000_000_000_001_819,
    1.000_000_000_000_909_5,
];

/// `B_{2k} / (2k (2k-1))` for `k = 1..=8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN: f64 = 10.0;
const SERIES_RADIUS: f64 = 0.25;

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Near the zeros at 1 and 2 the Taylor series of `ln Γ(1+z)` is used so the
/// result keeps its relative accuracy; elsewhere the argument is shifted
/// above 10 and the Stirling series is summed.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "log_gamma requires a finite x > 0",
            value: x,
        });
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    let z1 = x - 1.0;
    if z1.abs() <= SERIES_RADIUS {
        return ln_gamma_1p_series(z1);
    }
    let z2 = x - 2.0;
    if z2.abs() <= SERIES_RADIUS {
        return z2.ln_1p() + ln_gamma_1p_series(z2);
    }
    if x < 1.0 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

/// `ln Γ(1+z) = -γ z + Σ_{k≥2} (-1)^k ζ(k) z^k / k` for `|z| ≤ 1/4`.
fn ln_gamma_1p_series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = -z;
    for (i, zeta) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        power *= -z;
        sum += zeta * power / k;
    }
    sum - EULER_GAMMA * z
}

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut sum = 0.0;
    for c in STIRLING {
        sum += c * term;
        term *= inv2;
    }
    sum
}

fn stirling(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
}

/// `ln Γ(x + a) - ln Γ(x)` without cancellation, for large `x`.
///
/// Falls back to the plain difference when either argument is below the
/// Stirling threshold.
pub fn log_gamma_ratio(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0) || !(x + a > 0.0) {
        return Err(Error::Domain {
            what: "log_gamma_ratio requires x > 0 and x + a > 0",
            value: x.min(x + a),
        });
    }
    if x < STIRLING_MIN || x + a < STIRLING_MIN {
        return Ok(ln_gamma_pos(x + a) - ln_gamma_pos(x));
    }
    let xa = x + a;
    Ok((x - 0.5) * (a / x).ln_1p() + a * xa.ln() - a + (stirling_tail(xa) - stirling_tail(x)))
}

/// A generalized binomial coefficient `A_n^{(γ)} = binom(n+γ, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenBinom {
    pub n: usize,
    pub gamma: f64,
    /// May be `+inf` when `log_value` exceeds the `f64` range.
    pub value: f64,
    pub log_value: f64,
}

/// `A_n^{(γ)} = Π_{k=1}^{n} (γ+k)/k` for `γ > -1`.
///
/// The product is formed directly up to [`GEN_BINOM_DIRECT_MAX`] and through
/// `ln Γ(n+γ+1) - ln Γ(n+1) - ln Γ(γ+1)` beyond it.
pub fn gen_binom(n: usize, gamma: f64) -> Result<GenBinom> {
    check_order(gamma)?;
    if n <= GEN_BINOM_DIRECT_MAX {
        let value = gen_binom_product(n, gamma);
        Ok(GenBinom {
            n,
            gamma,
            value,
            log_value: value.ln(),
        })
    } else {
        let log_value = gen_binom_log(n, gamma)?;
        Ok(GenBinom {
            n,
            gamma,
            value: log_value.exp(),
            log_value,
        })
    }
}

fn check_order(gamma: f64) -> Result<()> {
    if !(gamma > -1.0) || !gamma.is_finite() {
        return Err(Error::Domain {
            what: "generalized binomial A_n^(γ) requires γ > -1",
            value: gamma,
        });
    }
    Ok(())
}

/// Direct product `Π_{k=1}^{n} (γ+k)/k`. Valid for any real `γ`.
pub fn gen_binom_product(n: usize, gamma: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| {
        let k = k as f64;
        acc * (gamma + k) / k
    })
}

/// `ln A_n^{(γ)}` through gamma-function ratios, `γ > -1`.
pub fn gen_binom_log(n: usize, gamma: f64) -> Result<f64> {
    check_order(gamma)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(log_gamma_ratio(n as f64 + 1.0, gamma)? - ln_gamma_pos(gamma + 1.0))
}

/// `A_n^{(order)}` as `(sign, ln|A|)` for any `order > -2`.
///
/// Orders in `(-2, -1]` arise as Cesàro weights `A^{(γ-1)}` with
/// `-1 < γ ≤ 0`; they use `A_n^{(o)} = (o+1)/n · A_{n-1}^{(o+1)}`.
/// A zero coefficient is reported as sign `0` with `ln|A| = -inf`.
pub fn gen_binom_signed(n: usize, order: f64) -> Result<(f64, f64)> {
    if !(order > -2.0) || !order.is_finite() {
        return Err(Error::Domain {
            what: "signed binomial A_n^(o) requires o > -2",
            value: order,
        });
    }
    if n == 0 {
        return Ok((1.0, 0.0));
    }
    if order > -1.0 {
        return Ok((1.0, gen_binom(n, order)?.log_value));
    }
    let head = order + 1.0;
    if head == 0.0 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    let rest = gen_binom(n - 1, head)?.log_value;
    Ok((head.signum(), head.abs().ln() - (n as f64).ln() + rest))
}

/// The value of `L_n^{(β)}(x)` together with its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreValue {
    pub n: usize,
    pub beta: f64,
    pub x: f64,
    pub value: f64,
}

fn check_laguerre_args(beta: f64, x: f64) -> Result<()> {
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(Error::Domain {
            what: "Laguerre order β must satisfy β > -1",
            value: beta,
        });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "Laguerre argument must satisfy x ≥ 0",
            value: x,
        });
    }
    Ok(())
}

/// `L_n^{(β)}(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+β-x) L_k - (k+β) L_{k-1}`.
pub fn laguerre_eval(n: usize, beta: f64, x: f64) -> Result<LaguerreValue> {
    check_laguerre_args(beta, x)?;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + beta - x) * cur - (kf + beta) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Err(Error::Overflow { n: k + 1, beta, x });
        }
    }
    Ok(LaguerreValue {
        n,
        beta,
        x,
        value: cur,
    })
}

/// `[L_0^{(β)}(x), …, L_{n_max}^{(β)}(x)]` from a single recurrence pass.
pub fn laguerre_sequence(n_max: usize, beta: f64, x: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n_max + 1];
    laguerre_sequence_into(beta, x, &mut out)?;
    Ok(out)
}

/// Fills `out[k] = L_k^{(β)}(x)` for `k < out.len()`.
pub fn laguerre_sequence_into(beta: f64, x: f64, out: &mut [f64]) -> Result<()> {
    check_laguerre_args(beta, x)?;
    let len = out.len();
    if len == 0 {
        return Ok(());
    }
    out[0] = 1.0;
    if len == 1 {
        return Ok(());
    }
    out[1] = 1.0 + beta - x;
    for k in 1..len - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + beta - x) * out[k] - (kf + beta) * out[k - 1]) / (kf + 1.0);
        if !next.is_finite() {
            return Err(Error::Overflow { n: k + 1, beta, x });
        }
        out[k + 1] = next;
    }
    Ok(())
}

const RESCALE_ABOVE: f64 = 1e150;

/// `L_n^{(β)}(x)` as `(sign, ln|L|)`, running the same recurrence with
/// periodic rescaling so arguments far beyond the `f64` range of the
/// polynomial itself stay usable. A zero value gives `(0, -inf)`.
pub fn laguerre_log_abs(n: usize, beta: f64, x: f64) -> Result<(f64, f64)> {
    check_laguerre_args(beta, x)?;
    let (mut prev, mut cur) = (0.0_f64, 1.0_f64);
    let mut log_scale = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + beta - x) * cur - (kf + beta) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_ABOVE {
            prev /= big;
            cur /= big;
            log_scale += big.ln();
        }
        if !cur.is_finite() {
            return Err(Error::Overflow { n: k + 1, beta, x });
        }
    }
    if cur == 0.0 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    Ok((cur.signum(), cur.abs().ln() + log_scale))
}
