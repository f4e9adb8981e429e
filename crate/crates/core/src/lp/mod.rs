//! Dense linear programming and the LP reductions the inverse models share.
//!
//! [`LpProblem`] is always a minimization. Rows are stored sparsely; the
//! solver keeps a dense basis inverse, which is the right trade-off for the
//! few-hundred-row problems produced by the inverse models.

mod bigm;
mod distance;
mod oracle;
mod simplex;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use bigm::{compute_big_m, BigM};
pub use distance::{build_distance_objective, Aggregation, DistanceEncoding, DistanceFragment, DistanceSpec, Norm};
pub use oracle::{min_over_vertices, vertex_enumeration_oracle, OracleError, ORACLE_MAX_DIM, ORACLE_MAX_ROWS};
pub use simplex::solve_lp_with;

/// Row comparison operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub terms: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// `minimize costs·x + offset` subject to the rows and `lower <= x <= upper`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpProblem {
    pub costs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub offset: f64,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its column index.
    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.costs.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.costs.len() - 1
    }

    /// Adds a free variable with zero cost.
    pub fn add_free(&mut self) -> usize {
        self.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) -> usize {
        self.rows.push(LpRow { terms, cmp, rhs });
        self.rows.len() - 1
    }

    /// Adds a dense row over the columns `cols`.
    pub fn add_dense_row(&mut self, cols: &[usize], coeffs: &[f64], cmp: Cmp, rhs: f64) -> usize {
        let terms = cols
            .iter()
            .zip(coeffs)
            .filter(|(_, &a)| a != 0.0)
            .map(|(&c, &a)| (c, a))
            .collect();
        self.add_row(terms, cmp, rhs)
    }

    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Objective value of `x` including the constant offset.
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.offset + self.costs.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|&(j, a)| a * x[j]).sum();
            let viol = match row.cmp {
                Cmp::Le => lhs - row.rhs,
                Cmp::Ge => row.rhs - lhs,
                Cmp::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    pub(crate) fn check(&self) -> Result<(), LpError> {
        let n = self.costs.len();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed(String::from("bound vectors disagree with cost vector length")));
        }
        if self.costs.iter().any(|c| !c.is_finite()) || !self.offset.is_finite() {
            return Err(LpError::Malformed(String::from("non-finite cost")));
        }
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(LpError::Malformed(format!("invalid bounds on column {j}")));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::Malformed(format!("non-finite rhs on row {i}")));
            }
            for &(j, a) in &row.terms {
                if j >= n {
                    return Err(LpError::Malformed(format!("row {i} references column {j} of {n}")));
                }
                if !a.is_finite() {
                    return Err(LpError::Malformed(format!("non-finite coefficient on row {i}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of [`solve_lp`].
///
/// `duals` follow the convention `reduced_costs = costs - Aᵀ·duals`, so a
/// `Ge` row carries a nonnegative multiplier and a `Le` row a nonpositive one
/// at optimality. `x`, `duals` and `reduced_costs` are only meaningful when
/// the status is [`LpStatus::Optimal`].
#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Dual objective `b·y + Σ bound·d` for the problem this result solved.
    pub fn dual_objective(&self, p: &LpProblem) -> f64 {
        let mut v = p.offset;
        for (row, y) in p.rows.iter().zip(&self.duals) {
            v += row.rhs * y;
        }
        for (j, &d) in self.reduced_costs.iter().enumerate() {
            let bound = if d > 0.0 { p.lower[j] } else { p.upper[j] };
            if bound.is_finite() {
                v += bound * d;
            }
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpOptions {
    /// Primal feasibility tolerance.
    pub feasibility_tol: f64,
    /// Reduced-cost threshold for optimality.
    pub optimality_tol: f64,
    /// Smallest acceptable pivot element.
    pub pivot_tol: f64,
    /// Iteration cap as a multiple of `rows + cols`.
    pub iteration_factor: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_switch: usize,
    /// Pivots between basis refactorizations.
    pub refactor_every: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            iteration_factor: 50,
            degenerate_switch: 20,
            refactor_every: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("malformed LP: {0}")]
    Malformed(String),
    #[error("simplex failed to converge after {iterations} iterations")]
    NumericalFailure { iterations: usize },
}

/// Solves `p` with default options.
pub fn solve_lp(p: &LpProblem) -> Result<LpResult, LpError> {
    solve_lp_with(p, &LpOptions::default())
}
