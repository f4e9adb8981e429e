//! Nonnegative least squares, `min ||Σ_t λ_t g_t - d||_2` subject to `λ >= 0`,
//! by the Lawson-Hanson active-set method.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;

#[derive(Clone, Debug, PartialEq)]
pub struct NnlsFit {
    pub weights: Vec<f64>,
    /// `Σ_t λ_t g_t`.
    pub fitted: Vec<f64>,
    /// Euclidean norm of `fitted - d`.
    pub residual: f64,
}

/// `generators[t]` is the `t`-th column; all must have the length of `target`.
pub fn nnls(generators: &[Vec<f64>], target: &[f64], tol: f64) -> NnlsFit {
    let k = generators.len();
    let n = target.len();
    let mut x = vec![0.0; k];
    let mut passive = vec![false; k];
    // columns that made the passive system singular; skipped until the set changes
    let mut blocked = vec![false; k];
    let scale = generators.iter().map(|g| linalg::norm2(g)).fold(0.0, f64::max).max(1.0)
        * linalg::norm2(target).max(1.0);
    let max_outer = 3 * k + 10;
    for _ in 0..max_outer {
        let r = residual_vec(generators, &x, target);
        // gradient of -1/2||r||^2 is Gᵀ(d - Gx)
        let w: Vec<f64> = generators.iter().map(|g| -linalg::dot(g, &r)).collect();
        let pick = (0..k)
            .filter(|&t| !passive[t] && !blocked[t] && w[t] > tol * scale)
            .max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a)));
        let Some(t) = pick else { break };
        passive[t] = true;
        loop {
            let idx: Vec<usize> = (0..k).filter(|&i| passive[i]).collect();
            let cols: Vec<&[f64]> = idx.iter().map(|&i| generators[i].as_slice()).collect();
            let Some(s) = linalg::least_squares(&cols, target, 1e-12) else {
                // dependent on the current passive set; it cannot reduce the residual
                passive[t] = false;
                blocked[t] = true;
                break;
            };
            if s.iter().all(|&v| v > tol) {
                for (i, &j) in idx.iter().enumerate() {
                    x[j] = s[i];
                }
                blocked.iter_mut().for_each(|b| *b = false);
                break;
            }
            // step toward s until the first weight hits zero
            let mut alpha = 1.0f64;
            for (i, &j) in idx.iter().enumerate() {
                if s[i] <= tol {
                    let denom = x[j] - s[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[j] / denom);
                    }
                }
            }
            for (i, &j) in idx.iter().enumerate() {
                x[j] += alpha * (s[i] - x[j]);
                if x[j] <= tol {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    let fitted = combine(generators, &x, n);
    let residual = linalg::norm2(&fitted.iter().zip(target).map(|(a, b)| a - b).collect::<Vec<_>>());
    NnlsFit { weights: x, fitted, residual }
}

fn combine(generators: &[Vec<f64>], w: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (g, &l) in generators.iter().zip(w) {
        if l != 0.0 {
            for (o, v) in out.iter_mut().zip(g) {
                *o += l * v;
            }
        }
    }
    out
}

fn residual_vec(generators: &[Vec<f64>], w: &[f64], target: &[f64]) -> Vec<f64> {
    let f = combine(generators, w, target.len());
    f.iter().zip(target).map(|(a, b)| a - b).collect()
}
