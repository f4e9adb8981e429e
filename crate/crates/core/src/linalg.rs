//! Small dense linear-algebra helpers shared by the solvers.

use alloc::vec;
use alloc::vec::Vec;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves the square system `m * x = rhs` by Gaussian elimination with
/// partial pivoting. `m` is row-major `n x n`. Returns `None` when a pivot
/// falls below `tol` relative to the largest entry.
pub fn solve_square(m: &[Vec<f64>], rhs: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut b = rhs.to_vec();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= tol * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Inverts a dense square matrix (row-major). `None` if singular.
pub fn invert(m: &[Vec<f64>], tol: f64) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= tol {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for k in 0..n {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f != 0.0 {
                for k in 0..n {
                    a[row][k] -= f * a[col][k];
                    inv[row][k] -= f * inv[col][k];
                }
            }
        }
    }
    Some(inv)
}

/// Least-squares solve of `min ||A x - b||_2` for a tall matrix given by its
/// columns, via Householder QR. Returns `None` if the columns are
/// numerically dependent.
pub fn least_squares(cols: &[&[f64]], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = b.len();
    let k = cols.len();
    if k == 0 {
        return Some(Vec::new());
    }
    if k > m {
        return None;
    }
    // column-major working copy
    let mut a: Vec<Vec<f64>> = cols.iter().map(|c| c.to_vec()).collect();
    let mut rhs = b.to_vec();
    let scale = a.iter().map(|c| norm2(c)).fold(0.0, f64::max).max(1e-300);
    for j in 0..k {
        let alpha_norm = libm::sqrt((j..m).map(|i| a[j][i] * a[j][i]).sum::<f64>());
        if alpha_norm <= tol * scale {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -alpha_norm } else { alpha_norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[j][i]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for col in a.iter_mut().skip(j) {
                let s: f64 = v.iter().zip(&col[j..]).map(|(x, y)| x * y).sum::<f64>() * 2.0 / vnorm2;
                for (i, vi) in v.iter().enumerate() {
                    col[j + i] -= s * vi;
                }
            }
            let s: f64 = v.iter().zip(&rhs[j..]).map(|(x, y)| x * y).sum::<f64>() * 2.0 / vnorm2;
            for (i, vi) in v.iter().enumerate() {
                rhs[j + i] -= s * vi;
            }
        }
    }
    let mut x = vec![0.0; k];
    for j in (0..k).rev() {
        let s: f64 = (j + 1..k).map(|c| a[c][j] * x[c]).sum();
        x[j] = (rhs[j] - s) / a[j][j];
    }
    Some(x)
}
