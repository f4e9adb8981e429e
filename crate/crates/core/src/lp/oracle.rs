//! Brute-force vertex enumeration for tiny polyhedra.

use alloc::vec::Vec;

use crate::combinatorics::next_combination;
use crate::linalg;
use crate::model::ForwardInstance;

pub const ORACLE_MAX_DIM: usize = 4;
pub const ORACLE_MAX_ROWS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance too large for vertex enumeration ({n} variables, {rows} rows)")]
    TooLarge { n: usize, rows: usize },
}

/// Every vertex of the feasible region, found by intersecting each
/// `n`-subset of rows and keeping the feasible solutions. Points closer than
/// `1e-7` are merged. Order follows the first subset producing each vertex.
pub fn vertex_enumeration_oracle(inst: &ForwardInstance) -> Result<Vec<Vec<f64>>, OracleError> {
    let n = inst.dim();
    let rows = inst.constraints();
    if n > ORACLE_MAX_DIM || rows.len() > ORACLE_MAX_ROWS {
        return Err(OracleError::TooLarge { n, rows: rows.len() });
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    if rows.len() < n {
        return Ok(out);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let m: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].coeffs.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| rows[i].rhs).collect();
        if let Some(x) = linalg::solve_square(&m, &b, 1e-12) {
            let scale = 1.0 + linalg::norm_inf(&x);
            if inst.is_feasible(&x, 1e-9 * scale)
                && !out.iter().any(|v| v.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-7))
            {
                out.push(x);
            }
        }
        if !next_combination(&mut idx, rows.len()) {
            break;
        }
    }
    Ok(out)
}

/// Smallest `c·v` over the vertices, with the minimizing vertex.
pub fn min_over_vertices(vertices: &[Vec<f64>], c: &[f64]) -> Option<(f64, Vec<f64>)> {
    vertices
        .iter()
        .map(|v| (linalg::dot(c, v), v.clone()))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}
