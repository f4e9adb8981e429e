//! Recovering a cost vector for an inferred point.
//!
//! The costs making `z` optimal are the cone spanned by the outward normals
//! of the relevant rows tight at `z`. Among unit vectors of that cone the one
//! maximizing the total observed objective `d·c` with `d = Σ_k x^k` is the
//! normalized Euclidean projection of `d` onto the cone, whenever that
//! projection is nonzero.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{CostNorm, SolverConfig};
use crate::linalg;
use crate::model::{check_learning_point, ForwardInstance, ModelError, ObservationSet, OptimalityCertificate};
use crate::nnls;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum UtilityError {
    #[error("no relevant constraint is tight at the point")]
    EmptyCone,
    #[error("point is not feasible")]
    InfeasiblePoint,
    #[error("observation set is empty")]
    EmptySet,
    #[error("cost vector does not certify the point")]
    NotOptimal,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Outward normals of the relevant rows tight at `origin`.
#[derive(Clone, Debug, PartialEq)]
pub struct CostCone {
    pub origin: Vec<f64>,
    /// Relevant positions, ascending.
    pub rows: Vec<usize>,
    pub generators: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    /// Normalized projection of `d` onto the cone.
    Projection,
    /// `d` projects to zero; best normalized generator.
    FaceFallback,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::Projection => "PROJECTION",
            Exactness::FaceFallback => "FACE_FALLBACK",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InferredCost {
    /// Unit cost in the Euclidean norm.
    pub c: Vec<f64>,
    /// Nonnegative weight per generator of the cone.
    pub lambda: Vec<f64>,
    /// `d·c / K`.
    pub avg_objective: f64,
    pub exactness: Exactness,
}

pub fn build_cone(inst: &ForwardInstance, z: &[f64], cfg: &SolverConfig) -> Result<CostCone, UtilityError> {
    if z.len() != inst.dim() {
        return Err(ModelError::Malformed(alloc::format!("point has {} entries, expected {}", z.len(), inst.dim())).into());
    }
    if !inst.is_feasible(z, cfg.tight_tol) {
        return Err(UtilityError::InfeasiblePoint);
    }
    let rows = inst.tight_relevant(z, cfg.tight_tol);
    if rows.is_empty() {
        return Err(UtilityError::EmptyCone);
    }
    let generators = rows.iter().map(|&j| inst.relevant(j).outward_normal()).collect();
    Ok(CostCone { origin: z.to_vec(), rows, generators })
}

pub fn infer_cost(cone: &CostCone, obs: &ObservationSet, cfg: &SolverConfig) -> Result<InferredCost, UtilityError> {
    if cone.generators.is_empty() {
        return Err(UtilityError::EmptyCone);
    }
    if obs.is_empty() {
        return Err(UtilityError::EmptySet);
    }
    let d = obs.sum();
    let k = obs.len() as f64;
    let fit = nnls::nnls(&cone.generators, &d, cfg.nnls_tol);
    let norm = linalg::norm2(&fit.fitted);
    let scale = cone.generators.iter().map(|g| linalg::norm2(g)).fold(0.0, f64::max) * (1.0 + linalg::norm2(&d));
    if norm > 1e-12 * scale {
        let c: Vec<f64> = fit.fitted.iter().map(|v| v / norm).collect();
        let avg_objective = linalg::dot(&d, &c) / k;
        return Ok(InferredCost { c, lambda: fit.weights, avg_objective, exactness: Exactness::Projection });
    }
    // d lies in the polar cone; d·c/|c| is quasi-convex there, so some ray wins
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (t, g) in cone.generators.iter().enumerate() {
        let v = linalg::dot(&d, g) / linalg::norm2(g);
        if v > best_val + 1e-12 {
            best = t;
            best_val = v;
        }
    }
    let g = &cone.generators[best];
    let gn = linalg::norm2(g);
    let mut lambda = vec![0.0; cone.generators.len()];
    lambda[best] = 1.0 / gn;
    let c: Vec<f64> = g.iter().map(|v| v / gn).collect();
    Ok(InferredCost { avg_objective: best_val / k, c, lambda, exactness: Exactness::FaceFallback })
}

/// Dual certificate for `z` under `c`, or [`UtilityError::NotOptimal`].
pub fn certify(
    inst: &ForwardInstance,
    z: &[f64],
    c: &[f64],
    cfg: &SolverConfig,
) -> Result<OptimalityCertificate, UtilityError> {
    let cfg = SolverConfig { cost_norm: CostNorm::L2, ..*cfg };
    check_learning_point(inst, z, c, &cfg)?.ok_or(UtilityError::NotOptimal)
}
