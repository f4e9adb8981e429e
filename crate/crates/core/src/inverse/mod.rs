//! Inverse learning: projecting observations onto points that some cost
//! makes optimal, with control over how many relevant rows bind.
//!
//! Every model reduces to LPs of the same shape: minimize the distance
//! objective over the feasible region with a chosen set of relevant rows
//! forced to equality. [`InverseLearner`] builds those LPs and searches over
//! the forced sets.

mod learner;
mod search;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use learner::{InverseLearner, SequenceStep};

use crate::lp::LpError;
use crate::model::{ForwardInstance, ModelError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Projection onto a single relevant hyperplane.
    Bil,
    /// Best single-hyperplane projection over all relevant rows.
    Alg1,
    /// Exactly `p` relevant rows binding.
    Il,
    /// One more binding row on top of a previous solution.
    Seq,
    /// `p` binding rows, rewarding preferred ones.
    Mil,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bil => "BIL",
            Method::Alg1 => "ALG1",
            Method::Il => "IL",
            Method::Seq => "SEQ",
            Method::Mil => "MIL",
        }
    }
}

/// Weights of the scalarized preferred-row objective
/// `(ω1/K)·D - (ω2/|S|)·|selected ∩ S|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilWeights {
    pub omega1: f64,
    pub omega2: f64,
}

impl Default for MilWeights {
    fn default() -> Self {
        Self { omega1: 1.0, omega2: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseSolution {
    pub method: Method,
    /// Number of selected binding rows (1 for BIL and ALG1).
    pub p: usize,
    /// The inferred decision.
    pub z: Vec<f64>,
    /// Relevant positions forced to bind, ascending.
    pub selected: Vec<usize>,
    /// Relevant positions actually tight at `z`; a superset of `selected`.
    pub tight: Vec<usize>,
    /// Trivial positions tight at `z`.
    pub tight_trivial: Vec<usize>,
    /// Distance of `z` to the observations, recomputed from `z`.
    pub distance: f64,
    /// Value the search minimized: the distance, or the scalarized MIL score.
    pub objective: f64,
    /// `x^k - z`, one row per observation.
    pub per_observation_eps: Vec<Vec<f64>>,
    /// `M_j` per relevant row; empty for the single-hyperplane methods.
    pub big_m: Vec<f64>,
    /// Number of preferred rows among `selected`.
    pub preferred_bound_count: usize,
}

impl InverseSolution {
    /// Binding selector `v` over the relevant rows.
    pub fn selector(&self, m1: usize) -> Vec<u8> {
        let mut v = vec![0u8; m1];
        for &j in &self.selected {
            v[j] = 1;
        }
        v
    }

    pub fn selected_names(&self, inst: &ForwardInstance) -> Vec<String> {
        self.selected.iter().map(|&j| inst.relevant(j).name.clone()).collect()
    }

    pub fn tight_names(&self, inst: &ForwardInstance) -> Vec<String> {
        self.tight.iter().map(|&j| inst.relevant(j).name.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepMode {
    /// Solve every `p` from scratch.
    Independent,
    /// Chain one-row extensions from the first solution.
    Dependent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrontierStatus {
    Ok,
    InfeasibleAtP,
    Terminated,
}

impl FrontierStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FrontierStatus::Ok => "OK",
            FrontierStatus::InfeasibleAtP => "INFEASIBLE_AT_P",
            FrontierStatus::Terminated => "TERMINATED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierPoint {
    pub p: usize,
    pub status: FrontierStatus,
    pub solution: Option<InverseSolution>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frontier {
    pub mode: SweepMode,
    pub points: Vec<FrontierPoint>,
}

impl Frontier {
    /// Solutions of the points with status `Ok`, in `p` order.
    pub fn solutions(&self) -> impl Iterator<Item = &InverseSolution> {
        self.points.iter().filter_map(|pt| pt.solution.as_ref())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum InverseError {
    #[error("no feasible point binds {p} relevant constraints")]
    InfeasibleAtP { p: usize },
    #[error("no relevant hyperplane meets the feasible region")]
    AllInfeasible,
    #[error("hyperplane of relevant constraint {j} does not meet the feasible region")]
    HyperplaneMissed { j: usize },
    #[error("no preferred constraints")]
    NoPreferred,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("distance LP is unbounded")]
    Unbounded,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}
