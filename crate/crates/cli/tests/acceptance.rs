//! Acceptance suite: ten criteria, one PASS/FAIL line each. Exits non-zero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use laguerre_cesaro::conditions::{
    check_condition_growth, check_condition_tail, default_growth_grid, default_tail_grid, ModulusFunction,
};
use laguerre_cesaro::expansion::{
    cesaro_mean_direct, cesaro_mean_kernel_at_zero, deviation_at_zero, fourier_laguerre_coeffs, ExpansionParams,
    Method,
};
use laguerre_cesaro::function::ExpPowerSum;
use laguerre_cesaro::quadrature::{gauss_laguerre_rule, integrate_weighted};
use laguerre_cesaro::ratelab::{
    deviation_sweep, fit_loglog_slope, lemma1_envelope, lemma2_envelope, lemma3_envelope, log_spaced_n,
};
use laguerre_cesaro::specfun::{gen_binom, laguerre_eval, laguerre_sequence, log_gamma};
use laguerre_cesaro_cli::commands::{CoeffsReport, ConditionsReport, SweepReport};

// Tolerances and budgets, one block per criterion.
const C1_RTOL: f64 = 1e-10;
const C1_BUDGET: Duration = Duration::from_secs(5);
const C2_TOL: f64 = 1e-9;
const C2_MAX_INDEX: usize = 30;
const C2_BUDGET: Duration = Duration::from_secs(5);
const C3_TOL: f64 = 1e-10;
const C3_BUDGET: Duration = Duration::from_secs(5);
const C4_RTOL: f64 = 1e-7;
const C4_BUDGET: Duration = Duration::from_secs(60);
const C5_COEFF_TOL: f64 = 1e-10;
const C5_MEAN_TOL: f64 = 1e-8;
const C6_SLACK: f64 = 1e-6;
const C6_BUDGET: Duration = Duration::from_secs(30);
const C7_SLOPE_MAX: f64 = -5.0 / 16.0 + 0.1;
const C7_STABILITY: f64 = 0.3;
const C7_BUDGET: Duration = Duration::from_secs(120);
const C8_MIN_DECREASE: f64 = 10.0;
const C8_ZERO: f64 = 1e-8;
const C9_STABILITY: f64 = 0.1;
const C9_N_MAX: usize = 2000;
const C9_BUDGET: Duration = Duration::from_secs(60);

const RTOL: f64 = 1e-12;
const ALPHAS: [f64; 4] = [-0.5, 0.0, 0.5, 1.7];
const MATRIX_ALPHAS: [f64; 3] = [-0.5, 0.0, 0.5];
const MATRIX_GAMMAS: [f64; 3] = [1.0, 2.0, 3.0];
const MATRIX_N: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn timed(budget: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = run();
    let elapsed = start.elapsed();
    o.detail = format!("{}; {:.2?} (budget {:?})", o.detail, elapsed, budget);
    o.passed &= elapsed < budget;
    o
}

fn gamma_fn(x: f64) -> f64 {
    log_gamma(x).unwrap().exp()
}

fn matrix_functions() -> Vec<(&'static str, ExpPowerSum, f64)> {
    vec![
        ("f1", ExpPowerSum::exponential(0.5), 1.0),
        ("f2(0.3)", ExpPowerSum::power(0.3), 0.0),
        ("f2(1)", ExpPowerSum::power(1.0), 0.0),
        ("const 2", ExpPowerSum::constant(2.0), 2.0),
    ]
}

fn criterion_1() -> Outcome {
    timed(C1_BUDGET, || {
        let mut worst: f64 = 0.0;
        for alpha in ALPHAS {
            for m in 2..=64 {
                let rule = gauss_laguerre_rule(m, alpha).unwrap();
                for j in 0..2 * m {
                    let want = gamma_fn(alpha + j as f64 + 1.0);
                    let got = integrate_weighted(&rule, |x| x.powi(j as i32)).unwrap();
                    worst = worst.max(((got - want) / want).abs());
                }
            }
        }
        outcome(worst <= C1_RTOL, format!("max relative moment error {worst:.2e} (tol {C1_RTOL:e})"))
    })
}

fn criterion_2() -> Outcome {
    timed(C2_BUDGET, || {
        let mut worst: f64 = 0.0;
        // The same integral with L_ν^(α+1) in place of L_ν^(α) telescopes to 1 for every ν.
        let mut shifted_worst: f64 = 0.0;
        for alpha in ALPHAS {
            let rule = gauss_laguerre_rule(64, alpha).unwrap();
            let g = gamma_fn(alpha + 1.0);
            let seqs: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| laguerre_sequence(C2_MAX_INDEX, alpha, x).unwrap()).collect();
            let shifted: Vec<Vec<f64>> =
                rule.nodes.iter().map(|&x| laguerre_sequence(C2_MAX_INDEX, alpha + 1.0, x).unwrap()).collect();
            for nu in 0..=C2_MAX_INDEX {
                let single: f64 = rule.weights.iter().zip(&seqs).map(|(w, l)| w * l[nu]).sum::<f64>() / g;
                worst = worst.max((single - if nu == 0 { 1.0 } else { 0.0 }).abs());
                let telescoped: f64 = rule.weights.iter().zip(&shifted).map(|(w, l)| w * l[nu]).sum::<f64>() / g;
                shifted_worst = shifted_worst.max((telescoped - 1.0).abs());
                let norm = g * gen_binom(nu, alpha).unwrap().value;
                for mu in 0..=C2_MAX_INDEX {
                    let ip: f64 = rule.weights.iter().zip(&seqs).map(|(w, l)| w * l[nu] * l[mu]).sum::<f64>() / norm;
                    worst = worst.max((ip - if nu == mu { 1.0 } else { 0.0 }).abs());
                }
            }
        }
        outcome(
            worst <= C2_TOL && shifted_worst <= C2_TOL,
            format!(
                "64-node rules, max deviation from Kronecker delta {worst:.2e}; with L^(α+1) the integral is 1 for all ν ≤ {C2_MAX_INDEX} to {shifted_worst:.2e} (tol {C2_TOL:e})"
            ),
        )
    })
}

fn criterion_3() -> Outcome {
    timed(C3_BUDGET, || {
        let mut worst: f64 = 0.0;
        for alpha in ALPHAS {
            for i in 0..=200 {
                let x = 50.0 * i as f64 / 200.0;
                let lower = laguerre_sequence(60, alpha, x).unwrap();
                let mut acc = 0.0;
                for k in 0..=60 {
                    acc += lower[k];
                    let upper = laguerre_eval(k, alpha + 1.0, x).unwrap().value;
                    worst = worst.max((upper - acc).abs() / (1.0 + upper.abs()));
                }
            }
        }
        outcome(worst <= C3_TOL, format!("max scaled residual {worst:.2e} (tol {C3_TOL:e})"))
    })
}

fn criterion_4() -> Outcome {
    timed(C4_BUDGET, || {
        let mut worst: f64 = 0.0;
        let mut where_ = String::new();
        for (name, f, _) in matrix_functions() {
            for alpha in MATRIX_ALPHAS {
                let table = fourier_laguerre_coeffs(&f, alpha, 64, RTOL).unwrap();
                for gamma in MATRIX_GAMMAS {
                    let p = ExpansionParams::new(alpha, gamma).unwrap();
                    for n in MATRIX_N {
                        let d = cesaro_mean_direct(&table, &p, n, 0.0).unwrap();
                        let k = cesaro_mean_kernel_at_zero(&f, &p, n, RTOL).unwrap().value;
                        let rel = (d - k).abs() / (1.0 + d.abs());
                        if rel > worst {
                            worst = rel;
                            where_ = format!("{name} α={alpha} γ={gamma} n={n}");
                        }
                    }
                }
            }
        }
        outcome(worst <= C4_RTOL, format!("252 entries, max |direct-kernel|/(1+|v|) {worst:.2e} at {where_} (tol {C4_RTOL:e})"))
    })
}

fn criterion_5() -> Outcome {
    let f1 = ExpPowerSum::exponential(0.5);
    let table = fourier_laguerre_coeffs(&f1, 0.0, 512, RTOL).unwrap();
    let coeff_err = table
        .values
        .iter()
        .enumerate()
        .map(|(nu, a)| (a - 2.0 / 3.0 * 3f64.powi(-(nu as i32))).abs())
        .fold(0.0, f64::max);
    let p = ExpansionParams::new(0.0, 1.0).unwrap().with_eta(0.125).unwrap();
    let at_two = deviation_at_zero(&f1, 1.0, &p, 2, Method::Both, RTOL).unwrap().value;
    let two_err = (at_two - 13.0 / 81.0).abs();
    // S_k = 1 - 3^{-(k+1)} averaged with weights 1/(n+1): deviation (1 - 3^{-(n+1)}) / (2(n+1)).
    let ns = log_spaced_n(1, 512, 24).unwrap();
    let sweep = deviation_sweep(&f1, 1.0, &ModulusFunction::identity(), &p, &ns, Method::Both, RTOL).unwrap();
    let sweep_err = ns
        .iter()
        .zip(&sweep.deviations)
        .map(|(&n, d)| (d - (1.0 - 3f64.powi(-(n as i32 + 1))) / (2.0 * (n as f64 + 1.0))).abs())
        .fold(0.0, f64::max);
    outcome(
        coeff_err <= C5_COEFF_TOL && two_err <= C5_MEAN_TOL && sweep_err <= C5_MEAN_TOL,
        format!(
            "coefficients (ν ≤ 512) {coeff_err:.2e} (tol {C5_COEFF_TOL:e}); n=2 deviation {at_two:.12} vs 13/81 err {two_err:.2e}; sweep of {} n max err {sweep_err:.2e} (tol {C5_MEAN_TOL:e})",
            ns.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    timed(C6_BUDGET, || {
        let (alpha, gamma) = (0.0, 1.0);
        let mut ok = true;
        let mut parts = Vec::new();
        let f1 = ExpPowerSum::exponential(0.5);
        let w1 = ModulusFunction::identity();
        let g = check_condition_growth(&f1, 1.0, alpha, &w1, default_growth_grid()).unwrap();
        let bound = 1.0 / (2.0 * gamma_fn(alpha + 1.0) * (alpha + 2.0));
        ok &= g.passed && g.sup_ratio <= bound + C6_SLACK;
        parts.push(format!("f1 growth {:.7} ≤ {bound}", g.sup_ratio));
        let t = check_condition_tail(&f1, 1.0, alpha, gamma, &w1, default_tail_grid()).unwrap();
        let bound = 2f64.powf(alpha - gamma + 5.0 / 3.0) * gamma_fn(alpha - gamma + 8.0 / 3.0) / gamma_fn(alpha + 1.0);
        ok &= t.passed && t.sup_ratio <= bound;
        parts.push(format!("f1 tail {:.4} ≤ {bound:.4}", t.sup_ratio));
        for delta in [0.3, 0.5, 1.0] {
            let f2 = ExpPowerSum::power(delta);
            let w2 = ModulusFunction::power(delta).unwrap();
            let g = check_condition_growth(&f2, 0.0, alpha, &w2, default_growth_grid()).unwrap();
            let bound = 1.0 / (gamma_fn(alpha + 1.0) * (alpha + delta + 1.0));
            ok &= g.passed && g.sup_ratio <= bound + C6_SLACK;
            parts.push(format!("f2({delta}) growth {:.7} ≤ {bound:.7}", g.sup_ratio));
            let t = check_condition_tail(&f2, 0.0, alpha, gamma, &w2, default_tail_grid()).unwrap();
            let bound = 2f64.powf(alpha - gamma + 2.0 * delta + 2.0 / 3.0) * gamma_fn(alpha - gamma + 2.0 * delta + 2.0 / 3.0)
                / gamma_fn(alpha + 1.0);
            ok &= t.passed && t.sup_ratio <= bound;
            parts.push(format!("f2({delta}) tail {:.4} ≤ {bound:.4}", t.sup_ratio));
        }
        outcome(ok, parts.join(", "))
    })
}

fn criterion_7() -> Outcome {
    timed(C7_BUDGET, || {
        let p = ExpansionParams::new(0.0, 3.0).unwrap().with_eta(5.0 / 8.0).unwrap();
        let f2 = ExpPowerSum::power(0.5);
        let w2 = ModulusFunction::power(0.5).unwrap();
        let ns = log_spaced_n(16, 512, 16).unwrap();
        let r = deviation_sweep(&f2, 0.0, &w2, &p, &ns, Method::Both, RTOL).unwrap();
        let upper: Vec<usize> = (0..ns.len()).filter(|&i| ns[i] >= 64).collect();
        let slope = fit_loglog_slope(
            &upper.iter().map(|&i| ns[i]).collect::<Vec<_>>(),
            &upper.iter().map(|&i| r.deviations[i]).collect::<Vec<_>>(),
        )
        .unwrap();
        let ratio = |cap: usize| {
            (0..ns.len())
                .filter(|&i| ns[i] <= cap)
                .map(|i| r.deviations[i] / w2.eval((ns[i] as f64).powf(-5.0 / 8.0)))
                .fold(0.0, f64::max)
        };
        let (s256, s512) = (ratio(256), ratio(512));
        let change = (s512 - s256).abs() / s256;
        outcome(
            slope <= C7_SLOPE_MAX && change < C7_STABILITY && s512.is_finite(),
            format!(
                "slope over n∈[64,512] {slope:.4} (max {C7_SLOPE_MAX}); sup dev/ω(n^-η) {s256:.4} → {s512:.4}, change {:.1}% (max {}%)",
                100.0 * change,
                100.0 * C7_STABILITY
            ),
        )
    })
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut min_decrease = f64::INFINITY;
    let mut vacuous = 0;
    for (name, f, f0) in matrix_functions() {
        for alpha in MATRIX_ALPHAS {
            for gamma in MATRIX_GAMMAS {
                let p = ExpansionParams::new(alpha, gamma).unwrap();
                let d8 = deviation_at_zero(&f, f0, &p, 8, Method::Kernel, RTOL).unwrap().value;
                let d512 = deviation_at_zero(&f, f0, &p, 512, Method::Kernel, RTOL).unwrap().value;
                if d8 <= C8_ZERO && d512 <= C8_ZERO {
                    vacuous += 1;
                    continue;
                }
                let decrease = d8 / d512;
                min_decrease = min_decrease.min(decrease);
                if !(decrease >= C8_MIN_DECREASE) {
                    failures.push(format!("{name} α={alpha} γ={gamma}: {decrease:.2}×"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "min decrease n=8→512 {min_decrease:.2}× (need {C8_MIN_DECREASE}×); {vacuous} entries already ≤ {C8_ZERO:e}; {} below: [{}]",
            failures.len(),
            failures.join("; ")
        ),
    )
}

fn criterion_9() -> Outcome {
    timed(C9_BUDGET, || {
        let ns = log_spaced_n(1, C9_N_MAX, 24).unwrap();
        let mut ok = true;
        let mut parts = Vec::new();
        let stable = |a: f64, b: f64| a.is_finite() && b.is_finite() && (a == b || ((b - a) / a).abs() < C9_STABILITY);
        for beta in [0.0, 0.5, 1.0] {
            let e = lemma1_envelope(beta, 1.0, 1.0, &ns, 400).unwrap();
            let s = stable(e.regime_a.sup, e.regime_a.refined_sup) && stable(e.regime_b.sup, e.regime_b.refined_sup);
            ok &= s;
            parts.push(format!("L1 β={beta} A {:.4} B {:.4}", e.regime_a.sup, e.regime_b.sup));
        }
        // default instance and the kernel instance β = α+γ+1, λ = (2α+2γ+3)/4 at α = 0, γ = 1
        for (beta, lambda) in [(0.0, 0.0), (2.0, 1.25)] {
            let e = lemma2_envelope(beta, lambda, 1.0, 2.0, &ns, 400).unwrap();
            let s = stable(e.regime_a.sup, e.regime_a.refined_sup) && stable(e.regime_b.sup, e.regime_b.refined_sup);
            ok &= s;
            parts.push(format!("L2 β={beta} λ={lambda} A {:.4} B {:.4}", e.regime_a.sup, e.regime_b.sup));
        }
        for gamma in [-0.5, 0.5, 1.0, 2.5] {
            let e = lemma3_envelope(gamma, 100_000, 400).unwrap();
            let s = e.monotone
                && e.min_ratio > 0.0
                && stable(e.min_ratio, e.refined_min_ratio)
                && stable(e.max_ratio, e.refined_max_ratio);
            ok &= s;
            parts.push(format!("L3 γ={gamma} [{:.4}, {:.4}]", e.min_ratio, e.max_ratio));
        }
        outcome(ok, parts.join(", "))
    })
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_laguerre-cesaro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bits(values: &[f64]) -> Vec<u64> {
    values.iter().map(|v| v.to_bits()).collect()
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();

    let sweep_args = ["sweep", "--function", "f1", "--alpha", "0", "--gamma", "1", "--eta", "0.125", "--n-min", "2", "--n-max", "64", "--n-count", "6"];
    let json_out = run_cli(&[&sweep_args[..], &["--format", "json"]].concat());
    let csv_out = run_cli(&[&sweep_args[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(json_out.stdout).unwrap();
    let report: SweepReport = serde_json::from_str(&text).unwrap();
    let again: SweepReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    let json_exact = report == again
        && bits(&report.results.deviations) == bits(&again.results.deviations)
        && bits(&report.results.bound_theorem) == bits(&again.results.bound_theorem);
    let csv_text = String::from_utf8(csv_out.stdout).unwrap();
    let csv_dev: Vec<f64> = csv_text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let csv_match = bits(&csv_dev) == bits(&report.results.deviations);
    ok &= json_exact && csv_match;
    parts.push(format!("sweep JSON round-trip {json_exact}, CSV = JSON {csv_match}"));

    let coeffs: CoeffsReport =
        serde_json::from_slice(&run_cli(&["coeffs", "--function", "f2", "--delta", "0.3", "--n-max", "64", "--format", "json"]).stdout)
            .unwrap();
    let back: CoeffsReport = serde_json::from_str(&serde_json::to_string_pretty(&coeffs).unwrap()).unwrap();
    let coeff_exact = bits(&coeffs.results.values) == bits(&back.results.values) && coeffs == back;
    ok &= coeff_exact;
    parts.push(format!("coeffs round-trip {coeff_exact}"));

    let cond: ConditionsReport = serde_json::from_slice(&run_cli(&["check-conditions", "--format", "json"]).stdout).unwrap();
    let back: ConditionsReport = serde_json::from_str(&serde_json::to_string(&cond).unwrap()).unwrap();
    ok &= cond == back;
    parts.push(format!("conditions round-trip {}", cond == back));

    for eta in ["0.3", "0", "-0.1"] {
        let out = run_cli(&["sweep", "--alpha", "0", "--gamma", "1", "--eta", eta]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        let good = out.status.code() == Some(2) && stderr.contains("0 < η < -(2(α-γ)+1)/4");
        ok &= good;
        parts.push(format!("η={eta} rejected with inequality {good}"));
    }
    outcome(ok, parts.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quadrature moments", criterion_1),
        ("orthogonality", criterion_2),
        ("summation identity", criterion_3),
        ("kernel/direct equivalence", criterion_4),
        ("exact oracle for f1", criterion_5),
        ("condition constants", criterion_6),
        ("rate of the power example", criterion_7),
        ("o(1) proxy: 10x decrease from n=8 to n=512", criterion_8),
        ("Laguerre and binomial envelopes", criterion_9),
        ("CLI round-trip and validation", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {}: {} ({})", i + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
