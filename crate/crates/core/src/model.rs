//! Forward instances, observation batches and the learning-point predicate.
//!
//! Every constraint is stored as written and also in outward-normal form
//! `normal·x <= bound`, so that the slack `bound - normal·x` is nonnegative
//! on the feasible side and `normal` points out of the region. A cost vector
//! certifies a maximizer exactly when it lies in the cone of the outward
//! normals of the relevant rows tight at that point.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::{CostNorm, SolverConfig};
use crate::linalg;
use crate::lp::{self, Cmp, LpError, LpProblem, LpStatus};
use crate::nnls;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    Relevant,
    Trivial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
    pub kind: ConstraintKind,
    pub preferred: bool,
}

impl LinearConstraint {
    pub fn relevant(name: impl Into<String>, coeffs: Vec<f64>, sense: Sense, rhs: f64) -> Self {
        Self { name: name.into(), coeffs, sense, rhs, kind: ConstraintKind::Relevant, preferred: false }
    }

    pub fn trivial(name: impl Into<String>, coeffs: Vec<f64>, sense: Sense, rhs: f64) -> Self {
        Self { name: name.into(), coeffs, sense, rhs, kind: ConstraintKind::Trivial, preferred: false }
    }

    pub fn with_preferred(mut self, preferred: bool) -> Self {
        self.preferred = preferred;
        self
    }

    pub fn is_relevant(&self) -> bool {
        self.kind == ConstraintKind::Relevant
    }

    /// Outward normal: `coeffs` for `<=` rows, `-coeffs` for `>=` rows.
    pub fn outward_normal(&self) -> Vec<f64> {
        match self.sense {
            Sense::Le => self.coeffs.clone(),
            Sense::Ge => self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Right-hand side of the outward form `normal·x <= bound`.
    pub fn outward_bound(&self) -> f64 {
        match self.sense {
            Sense::Le => self.rhs,
            Sense::Ge => -self.rhs,
        }
    }

    /// Slack, nonnegative exactly when `x` satisfies the row.
    pub fn slack(&self, x: &[f64]) -> f64 {
        let lhs = linalg::dot(&self.coeffs, x);
        match self.sense {
            Sense::Le => self.rhs - lhs,
            Sense::Ge => lhs - self.rhs,
        }
    }

    pub fn is_zero_row(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("feasible region is empty")]
    InfeasibleRegion,
    #[error("cost vector is zero")]
    ZeroCost,
    #[error("observation set is empty")]
    EmptySet,
    #[error("percentile {0} outside [0, 100]")]
    InvalidPercentile(f64),
    #[error("unknown constraint `{0}`")]
    UnknownConstraint(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// A forward linear program whose objective is unknown.
///
/// Relevant rows are addressed by their position `j` among relevant rows
/// (in declaration order); [`ForwardInstance::relevant_row`] maps that back
/// to the full constraint list.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardInstance {
    variables: Vec<String>,
    constraints: Vec<LinearConstraint>,
    relevant: Vec<usize>,
    trivial: Vec<usize>,
}

impl ForwardInstance {
    /// Structural checks only: dimensions, finiteness, and that preferred
    /// rows are relevant. Feasibility and the other semantic checks live in
    /// [`validate_instance`].
    pub fn new(variables: Vec<String>, constraints: Vec<LinearConstraint>) -> Result<Self, ModelError> {
        let n = variables.len();
        if n == 0 {
            return Err(ModelError::Malformed(String::from("instance has no variables")));
        }
        for c in &constraints {
            if c.coeffs.len() != n {
                return Err(ModelError::Malformed(format!(
                    "constraint `{}` has {} coefficients, expected {n}",
                    c.name,
                    c.coeffs.len()
                )));
            }
            if c.coeffs.iter().any(|a| !a.is_finite()) || !c.rhs.is_finite() {
                return Err(ModelError::Malformed(format!("constraint `{}` has non-finite data", c.name)));
            }
            if c.preferred && !c.is_relevant() {
                return Err(ModelError::Malformed(format!("trivial constraint `{}` marked preferred", c.name)));
            }
        }
        let relevant = (0..constraints.len()).filter(|&i| constraints[i].is_relevant()).collect();
        let trivial = (0..constraints.len()).filter(|&i| !constraints[i].is_relevant()).collect();
        Ok(Self { variables, constraints, relevant, trivial })
    }

    /// Builds an instance with variables named `x1..xn`.
    pub fn with_dimension(n: usize, constraints: Vec<LinearConstraint>) -> Result<Self, ModelError> {
        Self::new((1..=n).map(|i| format!("x{i}")).collect(), constraints)
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// Number of relevant rows (`m1`).
    pub fn m1(&self) -> usize {
        self.relevant.len()
    }

    /// Number of trivial rows (`m2`).
    pub fn m2(&self) -> usize {
        self.trivial.len()
    }

    /// Index into [`Self::constraints`] of relevant row `j`.
    pub fn relevant_row(&self, j: usize) -> usize {
        self.relevant[j]
    }

    pub fn relevant(&self, j: usize) -> &LinearConstraint {
        &self.constraints[self.relevant[j]]
    }

    pub fn relevant_rows(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.relevant.iter().map(|&i| &self.constraints[i])
    }

    pub fn trivial_rows(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.trivial.iter().map(|&i| &self.constraints[i])
    }

    /// Relevant positions of the preferred rows (the set `S`).
    pub fn preferred(&self) -> Vec<usize> {
        (0..self.m1()).filter(|&j| self.relevant(j).preferred).collect()
    }

    pub fn relevant_position(&self, name: &str) -> Option<usize> {
        (0..self.m1()).find(|&j| self.relevant(j).name == name)
    }

    /// Copy of the instance whose preferred set is exactly `names`.
    pub fn with_preferred<S: AsRef<str>>(&self, names: &[S]) -> Result<Self, ModelError> {
        let mut out = self.clone();
        for c in &mut out.constraints {
            c.preferred = false;
        }
        for name in names {
            let name = name.as_ref();
            let c = out
                .constraints
                .iter_mut()
                .find(|c| c.name == name)
                .ok_or_else(|| ModelError::UnknownConstraint(String::from(name)))?;
            if !c.is_relevant() {
                return Err(ModelError::Malformed(format!("trivial constraint `{name}` cannot be preferred")));
            }
            c.preferred = true;
        }
        Ok(out)
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.constraints.iter().all(|c| c.slack(x) >= -tol)
    }

    /// Relevant positions whose slack at `x` is at most `tol`.
    pub fn tight_relevant(&self, x: &[f64], tol: f64) -> Vec<usize> {
        (0..self.m1()).filter(|&j| self.relevant(j).slack(x) <= tol).collect()
    }

    pub fn tight_trivial(&self, x: &[f64], tol: f64) -> Vec<usize> {
        (0..self.m2()).filter(|&t| self.constraints[self.trivial[t]].slack(x) <= tol).collect()
    }

    /// Appends every constraint as an LP row over the columns `z`, except the
    /// relevant positions in `skip`.
    pub(crate) fn push_rows(&self, lp: &mut LpProblem, z: &[usize], skip: &[usize]) {
        for (i, c) in self.constraints.iter().enumerate() {
            if skip.iter().any(|&j| self.relevant[j] == i) {
                continue;
            }
            let cmp = match c.sense {
                Sense::Le => Cmp::Le,
                Sense::Ge => Cmp::Ge,
            };
            lp.add_dense_row(z, &c.coeffs, cmp, c.rhs);
        }
    }

    /// An LP over free columns `0..n` containing every constraint, with zero cost.
    pub(crate) fn region_lp(&self) -> LpProblem {
        let mut lp = LpProblem::new();
        let z: Vec<usize> = (0..self.dim()).map(|_| lp.add_free()).collect();
        self.push_rows(&mut lp, &z, &[]);
        lp
    }
}

/// A batch of observed decisions, one row per observation.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservationSet {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl ObservationSet {
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        for (k, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(ModelError::Malformed(format!(
                    "observation {k} has {} entries, expected {n}",
                    r.len()
                )));
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::Malformed(format!("observation {k} has non-finite entries")));
            }
        }
        Ok(Self { n, rows })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Coordinatewise sum `Σ_k x^k`.
    pub fn sum(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for r in &self.rows {
            for (a, b) in d.iter_mut().zip(r) {
                *a += b;
            }
        }
        d
    }

    /// Perturbations `ε^k = x^k - z`, one row per observation.
    pub fn perturbations(&self, z: &[f64]) -> Vec<Vec<f64>> {
        self.rows.iter().map(|x| x.iter().zip(z).map(|(a, b)| a - b).collect()).collect()
    }
}

/// Dual certificate that a point maximizes `c·x` over the instance.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalityCertificate {
    /// Cost scaled to unit norm under `norm`.
    pub c: Vec<f64>,
    pub norm: CostNorm,
    /// One multiplier per relevant row; nonzero only on tight rows.
    pub y: Vec<f64>,
    /// Trivial-row multipliers, always zero.
    pub u: Vec<f64>,
    /// Relevant positions tight at the certified point.
    pub tight: Vec<usize>,
}

impl OptimalityCertificate {
    /// Largest deviation of `Σ_j y_j n_j` from `c`.
    pub fn dual_residual(&self, inst: &ForwardInstance) -> f64 {
        let mut r = self.c.clone();
        for (j, &y) in self.y.iter().enumerate() {
            if y != 0.0 {
                for (ri, a) in r.iter_mut().zip(inst.relevant(j).outward_normal()) {
                    *ri -= y * a;
                }
            }
        }
        linalg::norm_inf(&r)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub feasible: bool,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub preferred: Vec<String>,
    pub warnings: Vec<String>,
}

/// Semantic validation: zero rows, duplicate names, an empty relevant set
/// and an empty region are errors; rows that can never be tight are warned.
pub fn validate_instance(inst: &ForwardInstance, cfg: &SolverConfig) -> Result<ValidationReport, ModelError> {
    let mut seen = BTreeSet::new();
    for c in inst.constraints() {
        if c.is_zero_row() {
            return Err(ModelError::Malformed(format!("constraint `{}` has an all-zero coefficient row", c.name)));
        }
        if !seen.insert(c.name.as_str()) {
            return Err(ModelError::Malformed(format!("duplicate constraint name `{}`", c.name)));
        }
    }
    if inst.m1() == 0 {
        return Err(ModelError::Malformed(String::from("instance has no relevant constraints")));
    }
    let base = inst.region_lp();
    let feas = lp::solve_lp_with(&base, &cfg.lp)?;
    if feas.status == LpStatus::Infeasible {
        return Err(ModelError::InfeasibleRegion);
    }
    let mut warnings = Vec::new();
    for (i, c) in inst.constraints().iter().enumerate() {
        // minimize the slack of row i over the region
        let mut p = base.clone();
        let normal = c.outward_normal();
        for (col, a) in normal.iter().enumerate() {
            p.costs[col] = -a;
        }
        p.offset = c.outward_bound();
        let r = lp::solve_lp_with(&p, &cfg.lp)?;
        if r.status == LpStatus::Optimal && r.objective > cfg.tight_tol {
            warnings.push(format!(
                "constraint `{}` (row {i}) is never tight; minimum slack {:.6}",
                c.name, r.objective
            ));
        }
    }
    let preferred = inst.preferred().into_iter().map(|j| inst.relevant(j).name.clone()).collect();
    Ok(ValidationReport { feasible: true, n: inst.dim(), m1: inst.m1(), m2: inst.m2(), preferred, warnings })
}

/// Decides whether `x` is a feasible maximizer of `c·x`, i.e. whether `c`
/// lies in the cone of outward normals of the relevant rows tight at `x`.
///
/// Returns the certificate on success and `None` otherwise.
pub fn check_learning_point(
    inst: &ForwardInstance,
    x: &[f64],
    c: &[f64],
    cfg: &SolverConfig,
) -> Result<Option<OptimalityCertificate>, ModelError> {
    if c.len() != inst.dim() || x.len() != inst.dim() {
        return Err(ModelError::Malformed(String::from("point or cost has the wrong dimension")));
    }
    if c.iter().all(|&v| v == 0.0) {
        return Err(ModelError::ZeroCost);
    }
    if !inst.is_feasible(x, cfg.tight_tol) {
        return Ok(None);
    }
    let tight = inst.tight_relevant(x, cfg.tight_tol);
    if tight.is_empty() {
        return Ok(None);
    }
    let scale = linalg::norm2(c);
    let target: Vec<f64> = c.iter().map(|v| v / scale).collect();
    let normals: Vec<Vec<f64>> = tight.iter().map(|&j| inst.relevant(j).outward_normal()).collect();
    let fit = nnls::nnls(&normals, &target, cfg.nnls_tol);
    if fit.residual > cfg.cone_tol {
        return Ok(None);
    }
    let unit = cfg.cost_norm.norm(c);
    let c_unit: Vec<f64> = c.iter().map(|v| v / unit).collect();
    let ratio = scale / unit;
    let mut y = vec![0.0; inst.m1()];
    for (&j, &w) in tight.iter().zip(&fit.weights) {
        y[j] = w * ratio;
    }
    Ok(Some(OptimalityCertificate { c: c_unit, norm: cfg.cost_norm, y, u: vec![0.0; inst.m2()], tight }))
}

/// Per-variable percentiles (linear interpolation between order statistics).
#[derive(Clone, Debug, PartialEq)]
pub struct PercentileTable {
    pub percentiles: Vec<f64>,
    /// `values[i][q]` is percentile `q` of variable `i`.
    pub values: Vec<Vec<f64>>,
}

pub fn observation_stats(obs: &ObservationSet, percentiles: &[f64]) -> Result<PercentileTable, ModelError> {
    if let Some(&bad) = percentiles.iter().find(|p| !(0.0..=100.0).contains(*p)) {
        return Err(ModelError::InvalidPercentile(bad));
    }
    if obs.is_empty() {
        return Err(ModelError::EmptySet);
    }
    let values = (0..obs.dim())
        .map(|i| {
            let mut col: Vec<f64> = obs.rows().iter().map(|r| r[i]).collect();
            col.sort_by(f64::total_cmp);
            percentiles.iter().map(|&p| percentile_sorted(&col, p)).collect()
        })
        .collect();
    Ok(PercentileTable { percentiles: percentiles.to_vec(), values })
}

fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p / 100.0;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Mean forward objective `(1/K) Σ_k c·x^k`.
pub fn average_forward_objective(obs: &ObservationSet, c: &[f64]) -> Result<f64, ModelError> {
    if obs.is_empty() {
        return Err(ModelError::EmptySet);
    }
    Ok(linalg::dot(c, &obs.sum()) / obs.len() as f64)
}
