use super::{solve_lp_with, LpStatus};
use crate::config::SolverConfig;
use crate::model::{ForwardInstance, ModelError};

/// Bound on the slack of one relevant row over the feasible region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BigM {
    pub value: f64,
    /// True when the slack is unbounded and the configured default was used.
    pub fallback: bool,
}

/// `M_j = max { s_j(x) : x feasible }` for relevant row `j`.
pub fn compute_big_m(inst: &ForwardInstance, j: usize, cfg: &SolverConfig) -> Result<BigM, ModelError> {
    if j >= inst.m1() {
        return Err(ModelError::Malformed(alloc::format!("relevant index {j} out of range")));
    }
    let row = inst.relevant(j);
    let mut p = inst.region_lp();
    // max β - n·x  ==  -(min n·x - β)
    for (col, a) in row.outward_normal().into_iter().enumerate() {
        p.costs[col] = a;
    }
    p.offset = -row.outward_bound();
    let r = solve_lp_with(&p, &cfg.lp)?;
    match r.status {
        LpStatus::Optimal => Ok(BigM { value: (-r.objective).max(0.0), fallback: false }),
        LpStatus::Unbounded => {
            log::warn!(
                "slack of `{}` is unbounded over the region; using big-M {}",
                row.name,
                cfg.big_m_default
            );
            Ok(BigM { value: cfg.big_m_default, fallback: true })
        }
        LpStatus::Infeasible => Err(ModelError::InfeasibleRegion),
    }
}
