//! LP encodings of the distance objective between a projected point `z` and
//! every observation.

use alloc::vec::Vec;

use super::{Cmp, LpProblem};
use crate::linalg;
use crate::model::ObservationSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    LInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Aggregation {
    Sum,
    Max,
}

/// Distance between `z` and an observation batch: a per-observation norm of
/// `x^k - z`, aggregated by sum or max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DistanceSpec {
    pub norm: Norm,
    pub aggregation: Aggregation,
}

impl DistanceSpec {
    pub const L1_SUM: Self = Self { norm: Norm::L1, aggregation: Aggregation::Sum };
    pub const L1_MAX: Self = Self { norm: Norm::L1, aggregation: Aggregation::Max };
    pub const LINF_SUM: Self = Self { norm: Norm::LInf, aggregation: Aggregation::Sum };
    pub const LINF_MAX: Self = Self { norm: Norm::LInf, aggregation: Aggregation::Max };

    pub fn new(norm: Norm, aggregation: Aggregation) -> Self {
        Self { norm, aggregation }
    }

    /// Norm of a single perturbation vector.
    pub fn norm_of(&self, eps: &[f64]) -> f64 {
        match self.norm {
            Norm::L1 => linalg::norm1(eps),
            Norm::LInf => linalg::norm_inf(eps),
        }
    }

    /// Exact distance value of `z` against the observations.
    pub fn evaluate(&self, obs: &ObservationSet, z: &[f64]) -> f64 {
        let per = obs.rows().iter().map(|x| {
            let eps: Vec<f64> = x.iter().zip(z).map(|(a, b)| a - b).collect();
            self.norm_of(&eps)
        });
        match self.aggregation {
            Aggregation::Sum => per.sum(),
            Aggregation::Max => per.fold(0.0, f64::max),
        }
    }
}

impl Default for DistanceSpec {
    fn default() -> Self {
        Self::L1_SUM
    }
}

/// How the distance is written as an LP.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DistanceEncoding {
    /// Separable encodings where they exist: L1-sum as a sorted-breakpoint
    /// piecewise-linear function per coordinate (no extra rows), L∞-max
    /// through per-coordinate extremes. Other specs use the epigraph.
    #[default]
    Compact,
    /// One auxiliary per observation coordinate with `t ≥ ±(x - z)` rows.
    Epigraph,
}

/// An LP whose objective is the distance; `z` holds the free columns of the
/// projected point. Callers append their own rows over `z`.
#[derive(Clone, Debug)]
pub struct DistanceFragment {
    pub lp: LpProblem,
    pub z: Vec<usize>,
}

pub fn build_distance_objective(
    obs: &ObservationSet,
    spec: DistanceSpec,
    encoding: DistanceEncoding,
) -> DistanceFragment {
    let n = obs.dim();
    let mut lp = LpProblem::new();
    let z: Vec<usize> = (0..n).map(|_| lp.add_free()).collect();
    if obs.is_empty() {
        return DistanceFragment { lp, z };
    }
    match (encoding, spec.norm, spec.aggregation) {
        (DistanceEncoding::Compact, Norm::L1, Aggregation::Sum) => l1_sum_breakpoints(&mut lp, &z, obs),
        (DistanceEncoding::Compact, Norm::LInf, Aggregation::Max) => linf_max_extremes(&mut lp, &z, obs),
        (_, Norm::L1, agg) => l1_epigraph(&mut lp, &z, obs, agg),
        (_, Norm::LInf, agg) => linf_epigraph(&mut lp, &z, obs, agg),
    }
    DistanceFragment { lp, z }
}

/// `Σ_k |x^k_i - z_i|` is convex piecewise linear in `z_i` with breakpoints
/// at the sorted observation values. Writing `z_i` as the lowest breakpoint
/// plus segment increments (each bounded by its width) gives an exact LP
/// because minimization fills segments in slope order.
fn l1_sum_breakpoints(lp: &mut LpProblem, z: &[usize], obs: &ObservationSet) {
    let k = obs.len() as f64;
    for (i, &zi) in z.iter().enumerate() {
        let mut vals: Vec<f64> = obs.rows().iter().map(|x| x[i]).collect();
        vals.sort_by(f64::total_cmp);
        let base = vals[0];
        lp.offset += vals.iter().map(|v| v - base).sum::<f64>();
        let mut terms = Vec::with_capacity(vals.len() + 2);
        terms.push((zi, 1.0));
        let left = lp.add_var(k, 0.0, f64::INFINITY);
        terms.push((left, 1.0));
        let mut below = 0usize;
        let mut idx = 0;
        while idx < vals.len() {
            let v = vals[idx];
            while idx < vals.len() && vals[idx] == v {
                below += 1;
                idx += 1;
            }
            if idx < vals.len() {
                let width = vals[idx] - v;
                let slope = 2.0 * below as f64 - k;
                let seg = lp.add_var(slope, 0.0, width);
                terms.push((seg, -1.0));
            }
        }
        let right = lp.add_var(k, 0.0, f64::INFINITY);
        terms.push((right, -1.0));
        lp.add_row(terms, Cmp::Eq, base);
    }
}

fn linf_max_extremes(lp: &mut LpProblem, z: &[usize], obs: &ObservationSet) {
    let s = lp.add_var(1.0, 0.0, f64::INFINITY);
    for (i, &zi) in z.iter().enumerate() {
        let hi = obs.rows().iter().map(|x| x[i]).fold(f64::NEG_INFINITY, f64::max);
        let lo = obs.rows().iter().map(|x| x[i]).fold(f64::INFINITY, f64::min);
        lp.add_row(alloc::vec![(s, 1.0), (zi, 1.0)], Cmp::Ge, hi);
        lp.add_row(alloc::vec![(s, 1.0), (zi, -1.0)], Cmp::Ge, -lo);
    }
}

fn l1_epigraph(lp: &mut LpProblem, z: &[usize], obs: &ObservationSet, agg: Aggregation) {
    let per_coord_cost = if agg == Aggregation::Sum { 1.0 } else { 0.0 };
    let bound = (agg == Aggregation::Max).then(|| lp.add_var(1.0, 0.0, f64::INFINITY));
    for x in obs.rows() {
        let mut ts = Vec::with_capacity(z.len());
        for (i, &zi) in z.iter().enumerate() {
            let t = lp.add_var(per_coord_cost, 0.0, f64::INFINITY);
            lp.add_row(alloc::vec![(t, 1.0), (zi, 1.0)], Cmp::Ge, x[i]);
            lp.add_row(alloc::vec![(t, 1.0), (zi, -1.0)], Cmp::Ge, -x[i]);
            ts.push(t);
        }
        if let Some(s) = bound {
            let mut terms = alloc::vec![(s, 1.0)];
            terms.extend(ts.iter().map(|&t| (t, -1.0)));
            lp.add_row(terms, Cmp::Ge, 0.0);
        }
    }
}

fn linf_epigraph(lp: &mut LpProblem, z: &[usize], obs: &ObservationSet, agg: Aggregation) {
    let shared = (agg == Aggregation::Max).then(|| lp.add_var(1.0, 0.0, f64::INFINITY));
    for x in obs.rows() {
        let t = shared.unwrap_or_else(|| lp.add_var(1.0, 0.0, f64::INFINITY));
        for (i, &zi) in z.iter().enumerate() {
            lp.add_row(alloc::vec![(t, 1.0), (zi, 1.0)], Cmp::Ge, x[i]);
            lp.add_row(alloc::vec![(t, 1.0), (zi, -1.0)], Cmp::Ge, -x[i]);
        }
    }
}
