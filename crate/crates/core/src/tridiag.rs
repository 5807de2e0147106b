//! Implicit-shift QL iteration for symmetric tridiagonal matrices.
//!
//! Only the first component of every eigenvector is tracked, which is all
//! Golub–Welsch needs. The Jacobi matrices built here grow along the
//! diagonal, the ordering QL handles well.

use crate::{Error, Result};

/// Sweep budget per eigenvalue.
pub(crate) const MAX_SWEEPS: usize = 50;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `offdiag` (`offdiag[i]` couples rows `i` and `i+1`), sorted
/// ascending, paired with the squared first components of the normalized
/// eigenvectors.
pub(crate) fn eigen_first_components(diag: &[f64], offdiag: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = diag.len();
    assert_eq!(offdiag.len() + 1, n.max(1), "off-diagonal must have n-1 entries");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(offdiag);
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    budget: MAX_SWEEPS,
                });
            }

            // Wilkinson-type shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let top = z[i + 1];
                z[i + 1] = s * z[i] + c * top;
                z[i] = c * z[i] - s * top;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z.into_iter().map(|v| v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        assert_eq!(eigen_first_components(&[3.5], &[]).unwrap(), vec![(3.5, 1.0)]);
    }

    #[test]
    fn two_by_two_by_hand() {
        // [[1, 1], [1, 3]]: λ = 2 ∓ √2, first components² = (1 ± 1/√2)/2.
        let pairs = eigen_first_components(&[1.0, 3.0], &[1.0]).unwrap();
        let r2 = 2f64.sqrt();
        assert!((pairs[0].0 - (2.0 - r2)).abs() < 1e-15);
        assert!((pairs[1].0 - (2.0 + r2)).abs() < 1e-15);
        assert!((pairs[0].1 - (1.0 + 1.0 / r2) / 2.0).abs() < 1e-15);
        assert!((pairs[1].1 - (1.0 - 1.0 / r2) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn trace_and_component_mass_are_preserved() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|k| (k as f64 * 0.7).sin() * 3.0 + k as f64).collect();
        let off: Vec<f64> = (1..n).map(|k| 0.5 + (k as f64).sqrt()).collect();
        let pairs = eigen_first_components(&diag, &off).unwrap();
        let trace: f64 = diag.iter().sum();
        let eig_sum: f64 = pairs.iter().map(|p| p.0).sum();
        assert!((trace - eig_sum).abs() < 1e-11 * trace.abs());
        let mass: f64 = pairs.iter().map(|p| p.1).sum();
        assert!((mass - 1.0).abs() < 1e-13);
        assert!(pairs.windows(2).all(|w| w[0].0 <= w[1].0));
    }

    #[test]
    fn decoupled_blocks_deflate_immediately() {
        let pairs = eigen_first_components(&[1.0, 5.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(pairs, vec![(1.0, 1.0), (2.0, 0.0), (5.0, 0.0)]);
    }
}
