use crate::linalg;
use crate::lp::{DistanceEncoding, LpOptions};

/// Norm used to scale a certified cost vector to unit length.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CostNorm {
    L1,
    #[default]
    L2,
    LInf,
}

impl CostNorm {
    pub fn norm(self, c: &[f64]) -> f64 {
        match self {
            CostNorm::L1 => linalg::norm1(c),
            CostNorm::L2 => linalg::norm2(c),
            CostNorm::LInf => linalg::norm_inf(c),
        }
    }
}

/// Knobs shared by every solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// A row counts as tight when its slack is at most this.
    pub tight_tol: f64,
    /// Largest number of `p`-subsets enumerated before switching to branch and bound.
    pub enum_budget: u64,
    /// Big-M used when a row's slack is unbounded over the region.
    pub big_m_default: f64,
    pub cost_norm: CostNorm,
    /// Active-set tolerance of the nonnegative least-squares solver.
    pub nnls_tol: f64,
    /// Largest cone-membership residual accepted as a certificate.
    pub cone_tol: f64,
    pub encoding: DistanceEncoding,
    pub lp: LpOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tight_tol: 1e-7,
            enum_budget: 100_000,
            big_m_default: 1e6,
            cost_norm: CostNorm::L2,
            nnls_tol: 1e-10,
            cone_tol: 1e-8,
            encoding: DistanceEncoding::Compact,
            lp: LpOptions::default(),
        }
    }
}
