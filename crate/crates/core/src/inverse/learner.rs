use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::search::{self, Scorer};
use super::{
    Frontier, FrontierPoint, FrontierStatus, InverseError, InverseSolution, Method, MilWeights, SweepMode,
};
use crate::config::SolverConfig;
use crate::lp::{self, build_distance_objective, Cmp, DistanceSpec, LpProblem, LpStatus};
use crate::model::{ForwardInstance, ObservationSet, Sense};

/// How a constraint enters the LP over `z`.
#[derive(Clone, Copy, Debug)]
enum RowPlan {
    /// Single-variable row folded into the bounds of `z[var]`: `coef·z[var] (sense) rhs`.
    Bound { var: usize, coef: f64 },
    /// Regular LP row with this index.
    Row(usize),
}

/// Outcome of one dependent-sequencing step.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceStep {
    Advanced(InverseSolution),
    /// No feasible point keeps the previous bindings and binds one more row.
    Terminated,
}

/// Solver front end for one instance, observation batch and distance.
pub struct InverseLearner<'a> {
    inst: &'a ForwardInstance,
    obs: &'a ObservationSet,
    spec: DistanceSpec,
    cfg: SolverConfig,
    base: LpProblem,
    z: Vec<usize>,
    plans: Vec<RowPlan>,
}

impl<'a> InverseLearner<'a> {
    pub fn new(
        inst: &'a ForwardInstance,
        obs: &'a ObservationSet,
        spec: DistanceSpec,
        cfg: SolverConfig,
    ) -> Result<Self, InverseError> {
        if obs.dim() != inst.dim() {
            return Err(InverseError::InvalidArgument(format!(
                "observations have dimension {}, instance has {}",
                obs.dim(),
                inst.dim()
            )));
        }
        if obs.is_empty() {
            return Err(InverseError::InvalidArgument(String::from("observation set is empty")));
        }
        if inst.m1() == 0 {
            return Err(InverseError::InvalidArgument(String::from("instance has no relevant constraints")));
        }
        let frag = build_distance_objective(obs, spec, cfg.encoding);
        let mut base = frag.lp;
        let z = frag.z;
        let mut plans = Vec::with_capacity(inst.constraints().len());
        for c in inst.constraints() {
            let nz: Vec<usize> = (0..c.coeffs.len()).filter(|&i| c.coeffs[i] != 0.0).collect();
            if nz.len() == 1 {
                let var = nz[0];
                let coef = c.coeffs[var];
                let bound = c.rhs / coef;
                // coef·z ≤ rhs is an upper bound when coef > 0
                let upper = (c.sense == Sense::Le) == (coef > 0.0);
                let col = z[var];
                if upper {
                    base.upper[col] = base.upper[col].min(bound);
                } else {
                    base.lower[col] = base.lower[col].max(bound);
                }
                plans.push(RowPlan::Bound { var, coef });
            } else {
                let cmp = match c.sense {
                    Sense::Le => Cmp::Le,
                    Sense::Ge => Cmp::Ge,
                };
                plans.push(RowPlan::Row(base.add_dense_row(&z, &c.coeffs, cmp, c.rhs)));
            }
        }
        Ok(Self { inst, obs, spec, cfg, base, z, plans })
    }

    pub fn instance(&self) -> &ForwardInstance {
        self.inst
    }

    pub fn observations(&self) -> &ObservationSet {
        self.obs
    }

    pub fn spec(&self) -> DistanceSpec {
        self.spec
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Minimizes the distance with the relevant rows in `forced` held at
    /// equality. Returns the LP value and `z`, or `None` when infeasible.
    pub(super) fn solve_forced(&self, forced: &[usize]) -> Result<Option<(f64, Vec<f64>)>, InverseError> {
        let mut lp = self.base.clone();
        let tol = self.cfg.lp.feasibility_tol;
        for &j in forced {
            let c = self.inst.relevant(j);
            match self.plans[self.inst.relevant_row(j)] {
                RowPlan::Row(r) => lp.rows[r].cmp = Cmp::Eq,
                RowPlan::Bound { var, coef } => {
                    let col = self.z[var];
                    let v = c.rhs / coef;
                    let (lo, hi) = (lp.lower[col], lp.upper[col]);
                    if v < lo - tol * (1.0 + lo.abs()) || v > hi + tol * (1.0 + hi.abs()) {
                        return Ok(None);
                    }
                    let v = v.clamp(lo, hi);
                    lp.lower[col] = v;
                    lp.upper[col] = v;
                }
            }
        }
        let r = lp::solve_lp_with(&lp, &self.cfg.lp)?;
        match r.status {
            LpStatus::Optimal => Ok(Some((r.objective, self.z.iter().map(|&c| r.x[c]).collect()))),
            LpStatus::Infeasible => Ok(None),
            LpStatus::Unbounded => Err(InverseError::Unbounded),
        }
    }

    /// `M_j` for every relevant row.
    pub fn big_m(&self) -> Result<Vec<f64>, InverseError> {
        (0..self.inst.m1())
            .map(|j| Ok(lp::compute_big_m(self.inst, j, &self.cfg)?.value))
            .collect()
    }

    fn finish(
        &self,
        method: Method,
        z: Vec<f64>,
        mut selected: Vec<usize>,
        objective: f64,
        big_m: Vec<f64>,
    ) -> InverseSolution {
        selected.sort_unstable();
        let tol = self.cfg.tight_tol;
        let mut tight = self.inst.tight_relevant(&z, tol);
        // forced rows are tight by construction; keep T ⊇ selection under round-off
        for &j in &selected {
            if !tight.contains(&j) {
                tight.push(j);
            }
        }
        tight.sort_unstable();
        let pref = self.inst.preferred();
        InverseSolution {
            method,
            p: selected.len(),
            distance: self.spec.evaluate(self.obs, &z),
            objective,
            per_observation_eps: self.obs.perturbations(&z),
            tight_trivial: self.inst.tight_trivial(&z, tol),
            preferred_bound_count: selected.iter().filter(|j| pref.contains(j)).count(),
            tight,
            selected,
            big_m,
            z,
        }
    }

    /// Closest point to the observations on the hyperplane of relevant row `j`.
    pub fn solve_bil(&self, j: usize) -> Result<InverseSolution, InverseError> {
        if j >= self.inst.m1() {
            return Err(InverseError::InvalidArgument(format!("relevant index {j} out of range")));
        }
        match self.solve_forced(&[j])? {
            Some((obj, z)) => Ok(self.finish(Method::Bil, z, alloc::vec![j], obj, Vec::new())),
            None => Err(InverseError::HyperplaneMissed { j }),
        }
    }

    /// Best single-hyperplane projection over all relevant rows; ties go to
    /// the smallest index. Returns the solution and the winning row.
    pub fn algorithm1(&self) -> Result<(InverseSolution, usize), InverseError> {
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for j in 0..self.inst.m1() {
            if let Some((obj, z)) = self.solve_forced(&[j])? {
                if best.as_ref().is_none_or(|b| obj < b.0 - search::IMPROVEMENT) {
                    best = Some((obj, j, z));
                }
            }
        }
        let (obj, j, z) = best.ok_or(InverseError::AllInfeasible)?;
        Ok((self.finish(Method::Alg1, z, alloc::vec![j], obj, Vec::new()), j))
    }

    /// Closest point binding exactly `p` relevant rows.
    pub fn solve_il(&self, p: usize) -> Result<InverseSolution, InverseError> {
        self.solve_p(p, None)
    }

    /// As [`Self::solve_il`], trading distance against the number of
    /// preferred rows among the selected ones.
    pub fn solve_mil(&self, p: usize, weights: MilWeights) -> Result<InverseSolution, InverseError> {
        self.solve_p(p, Some(weights))
    }

    fn scorer(&self, weights: Option<MilWeights>, p: usize) -> Result<Scorer, InverseError> {
        let m1 = self.inst.m1();
        let Some(w) = weights else {
            return Ok(Scorer::distance(m1));
        };
        let pref = self.inst.preferred();
        if pref.is_empty() {
            return Err(InverseError::NoPreferred);
        }
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(w.omega1) || !ok(w.omega2) || (w.omega1 == 0.0 && w.omega2 == 0.0) {
            return Err(InverseError::InvalidArgument(format!(
                "weights must be nonnegative and not both zero (got {}, {})",
                w.omega1, w.omega2
            )));
        }
        if pref.len() > p {
            log::warn!("{} preferred constraints but only {p} can bind", pref.len());
        }
        Ok(Scorer::preferred(m1, &pref, w, self.obs.len()))
    }

    fn solve_p(&self, p: usize, weights: Option<MilWeights>) -> Result<InverseSolution, InverseError> {
        if p == 0 {
            return Err(InverseError::InvalidArgument(String::from("p must be at least 1")));
        }
        let scorer = self.scorer(weights, p)?;
        let method = if weights.is_some() { Method::Mil } else { Method::Il };
        if p > self.inst.m1() {
            return Err(InverseError::InfeasibleAtP { p });
        }
        let candidates: Vec<usize> = (0..self.inst.m1()).collect();
        let best = search::best_extension(self, &[], &candidates, p, &scorer)?
            .ok_or(InverseError::InfeasibleAtP { p })?;
        let big_m = self.big_m()?;
        Ok(self.finish(method, best.z, best.subset, best.score, big_m))
    }

    /// Keeps every binding of `start` and binds exactly one more relevant row.
    pub fn sequence_dependent(&self, start: &InverseSolution) -> Result<SequenceStep, InverseError> {
        self.sequence_step(start, None)
    }

    /// Dependent step scored by the preferred-row objective.
    pub fn sequence_dependent_mil(
        &self,
        start: &InverseSolution,
        weights: MilWeights,
    ) -> Result<SequenceStep, InverseError> {
        self.sequence_step(start, Some(weights))
    }

    fn sequence_step(&self, start: &InverseSolution, weights: Option<MilWeights>) -> Result<SequenceStep, InverseError> {
        let m1 = self.inst.m1();
        if start.selected.iter().any(|&j| j >= m1) {
            return Err(InverseError::InvalidArgument(String::from("start selection does not match the instance")));
        }
        let p = start.selected.len() + 1;
        let scorer = self.scorer(weights, p)?;
        let candidates: Vec<usize> = (0..m1).filter(|j| !start.selected.contains(j)).collect();
        let Some(best) = search::best_extension(self, &start.selected, &candidates, 1, &scorer)? else {
            return Ok(SequenceStep::Terminated);
        };
        let big_m = self.big_m()?;
        Ok(SequenceStep::Advanced(self.finish(Method::Seq, best.z, best.subset, best.score, big_m)))
    }

    /// Solutions for every `p` in `p_min..=p_max`.
    ///
    /// Independent mode solves each `p` on its own. Dependent mode solves
    /// `p_min` and then extends it one row at a time; once a step fails the
    /// remaining points are marked terminated.
    pub fn sweep(
        &self,
        p_min: usize,
        p_max: usize,
        mode: SweepMode,
        weights: Option<MilWeights>,
    ) -> Result<Frontier, InverseError> {
        if p_min == 0 || p_min > p_max {
            return Err(InverseError::InvalidArgument(format!("invalid range {p_min}..={p_max}")));
        }
        let mut points = Vec::with_capacity(p_max - p_min + 1);
        let mut prev: Option<InverseSolution> = None;
        for p in p_min..=p_max {
            let chained = mode == SweepMode::Dependent && p > p_min;
            let point = if chained {
                match prev.take() {
                    None => FrontierPoint { p, status: FrontierStatus::Terminated, solution: None },
                    Some(start) => match self.sequence_step(&start, weights)? {
                        SequenceStep::Advanced(s) => FrontierPoint { p, status: FrontierStatus::Ok, solution: Some(s) },
                        SequenceStep::Terminated => FrontierPoint { p, status: FrontierStatus::Terminated, solution: None },
                    },
                }
            } else {
                match self.solve_p(p, weights) {
                    Ok(s) => FrontierPoint { p, status: FrontierStatus::Ok, solution: Some(s) },
                    Err(InverseError::InfeasibleAtP { .. }) => {
                        FrontierPoint { p, status: FrontierStatus::InfeasibleAtP, solution: None }
                    }
                    Err(e) => return Err(e),
                }
            };
            prev = point.solution.clone();
            points.push(point);
        }
        Ok(Frontier { mode, points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{toy_instance, toy_observations};
    use crate::lp::DistanceEncoding;
    use crate::model::LinearConstraint;
    use alloc::vec;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-7)
    }

    fn with<R>(cfg: SolverConfig, f: impl FnOnce(&InverseLearner) -> R) -> R {
        let inst = toy_instance();
        let obs = toy_observations();
        let l = InverseLearner::new(&inst, &obs, DistanceSpec::L1_SUM, cfg).unwrap();
        f(&l)
    }

    #[test]
    fn bil_on_the_vertical_edge() {
        with(SolverConfig::default(), |l| {
            let s = l.solve_bil(4).unwrap();
            assert!(close(&s.z, &[10.0, 9.0]), "{:?}", s.z);
            assert!((s.distance - 3.0).abs() < 1e-9);
            assert_eq!(s.tight, vec![4]);
        });
    }

    #[test]
    fn bil_cut_off_by_neighbour() {
        with(SolverConfig::default(), |l| {
            let s = l.solve_bil(3).unwrap();
            assert!(close(&s.z, &[10.0, 10.0]), "{:?}", s.z);
            assert!((s.distance - 6.0).abs() < 1e-9);
            assert_eq!(s.tight, vec![3, 4]);
        });
    }

    #[test]
    fn bil_zero_perturbation() {
        let inst = toy_instance();
        let obs = ObservationSet::new(2, vec![vec![10.0, 4.0]]).unwrap();
        let l = InverseLearner::new(&inst, &obs, DistanceSpec::L1_SUM, SolverConfig::default()).unwrap();
        let s = l.solve_bil(4).unwrap();
        assert!(close(&s.z, &[10.0, 4.0]) && s.distance.abs() < 1e-12);
    }

    #[test]
    fn algorithm1_picks_g5() {
        with(SolverConfig::default(), |l| {
            let (s, j) = l.algorithm1().unwrap();
            assert_eq!(j, 4);
            assert!(close(&s.z, &[10.0, 9.0]) && (s.distance - 3.0).abs() < 1e-9);
        });
    }

    #[test]
    fn il_matches_algorithm1_at_one_and_binds_pair_at_two() {
        for budget in [100_000, 0] {
            let cfg = SolverConfig { enum_budget: budget, ..SolverConfig::default() };
            with(cfg, |l| {
                let s1 = l.solve_il(1).unwrap();
                assert!((s1.distance - 3.0).abs() < 1e-9);
                let s2 = l.solve_il(2).unwrap();
                assert!(close(&s2.z, &[10.0, 10.0]), "{:?}", s2.z);
                assert!((s2.distance - 6.0).abs() < 1e-9);
                assert_eq!(s2.selected, vec![3, 4]);
                assert_eq!(s2.big_m.len(), 5);
                assert!((s2.big_m[4] - 10.0).abs() < 1e-9 && (s2.big_m[3] - 20.0).abs() < 1e-9);
            });
        }
    }

    #[test]
    fn mil_weights_move_the_answer() {
        for budget in [100_000, 0] {
            let cfg = SolverConfig { enum_budget: budget, ..SolverConfig::default() };
            with(cfg, |l| {
                let s = l.solve_mil(2, MilWeights::default()).unwrap();
                assert!(close(&s.z, &[10.0, 10.0]));
                assert!((s.objective - 2.0).abs() < 1e-9, "{}", s.objective);
                let s = l.solve_mil(2, MilWeights { omega1: 1.0, omega2: 5.0 }).unwrap();
                assert!(close(&s.z, &[8.0, 12.0]), "{:?}", s.z);
                assert_eq!(s.selected, vec![2, 3]);
                assert_eq!(s.preferred_bound_count, 1);
                assert!((s.objective - (16.0 / 3.0 - 5.0)).abs() < 1e-9);
                let il = l.solve_il(2).unwrap();
                let s = l.solve_mil(2, MilWeights { omega1: 1.0, omega2: 0.0 }).unwrap();
                assert_eq!((s.z.clone(), s.selected.clone()), (il.z.clone(), il.selected.clone()));
            });
        }
    }

    #[test]
    fn mil_requires_preferred_rows() {
        let inst = toy_instance().with_preferred::<&str>(&[]).unwrap();
        let obs = toy_observations();
        let l = InverseLearner::new(&inst, &obs, DistanceSpec::L1_SUM, SolverConfig::default()).unwrap();
        assert_eq!(l.solve_mil(2, MilWeights::default()), Err(InverseError::NoPreferred));
        assert!(matches!(
            InverseLearner::new(&toy_instance(), &obs, DistanceSpec::L1_SUM, SolverConfig::default())
                .unwrap()
                .solve_mil(2, MilWeights { omega1: 0.0, omega2: 0.0 }),
            Err(InverseError::InvalidArgument(_))
        ));
    }

    #[test]
    fn dependent_sequence_then_terminates() {
        with(SolverConfig::default(), |l| {
            let s1 = l.solve_il(1).unwrap();
            assert_eq!(s1.selected, vec![4]);
            let SequenceStep::Advanced(s2) = l.sequence_dependent(&s1).unwrap() else { panic!("terminated early") };
            assert_eq!(s2.selected, vec![3, 4]);
            assert!(close(&s2.z, &[10.0, 10.0]) && (s2.distance - 6.0).abs() < 1e-9);
            assert_eq!(l.sequence_dependent(&s2).unwrap(), SequenceStep::Terminated);
        });
    }

    #[test]
    fn sweeps() {
        with(SolverConfig::default(), |l| {
            let f = l.sweep(1, 2, SweepMode::Dependent, None).unwrap();
            let d: Vec<f64> = f.solutions().map(|s| s.distance).collect();
            assert!((d[0] - 3.0).abs() < 1e-9 && (d[1] - 6.0).abs() < 1e-9);
            let f = l.sweep(2, 2, SweepMode::Independent, None).unwrap();
            assert_eq!(f.points.len(), 1);
            assert_eq!(f.points[0].solution.as_ref().unwrap(), &l.solve_il(2).unwrap());
            let f = l.sweep(1, 4, SweepMode::Dependent, None).unwrap();
            let st: Vec<FrontierStatus> = f.points.iter().map(|p| p.status).collect();
            assert_eq!(
                st,
                vec![FrontierStatus::Ok, FrontierStatus::Ok, FrontierStatus::Terminated, FrontierStatus::Terminated]
            );
            let f = l.sweep(2, 3, SweepMode::Independent, None).unwrap();
            assert_eq!(f.points[1].status, FrontierStatus::InfeasibleAtP);
        });
    }

    #[test]
    fn parallel_rows_have_no_vertex() {
        let r = LinearConstraint::relevant;
        let inst = ForwardInstance::with_dimension(
            2,
            vec![
                r("a", vec![0.0, 1.0], Sense::Le, 1.0),
                r("b", vec![0.0, 1.0], Sense::Ge, 0.0),
                LinearConstraint::trivial("c", vec![1.0, 0.0], Sense::Ge, 0.0),
                LinearConstraint::trivial("d", vec![1.0, 0.0], Sense::Le, 1.0),
            ],
        )
        .unwrap();
        let obs = ObservationSet::new(2, vec![vec![0.5, 0.5]]).unwrap();
        let l = InverseLearner::new(&inst, &obs, DistanceSpec::L1_SUM, SolverConfig::default()).unwrap();
        assert_eq!(l.solve_il(2), Err(InverseError::InfeasibleAtP { p: 2 }));
        assert_eq!(l.solve_il(99), Err(InverseError::InfeasibleAtP { p: 99 }));
    }

    #[test]
    fn encodings_agree_on_the_example() {
        for spec in [DistanceSpec::L1_SUM, DistanceSpec::L1_MAX, DistanceSpec::LINF_SUM, DistanceSpec::LINF_MAX] {
            let inst = toy_instance();
            let obs = toy_observations();
            let a = InverseLearner::new(&inst, &obs, spec, SolverConfig::default()).unwrap();
            let cfg = SolverConfig { encoding: DistanceEncoding::Epigraph, ..SolverConfig::default() };
            let b = InverseLearner::new(&inst, &obs, spec, cfg).unwrap();
            for p in 1..=2 {
                let (x, y) = (a.solve_il(p).unwrap(), b.solve_il(p).unwrap());
                assert!((x.distance - y.distance).abs() < 1e-7, "{spec:?} p={p}");
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let inst = toy_instance();
        let obs = ObservationSet::new(3, vec![vec![0.0; 3]]).unwrap();
        assert!(InverseLearner::new(&inst, &obs, DistanceSpec::L1_SUM, SolverConfig::default()).is_err());
        let empty = ObservationSet::new(2, vec![]).unwrap();
        assert!(InverseLearner::new(&inst, &empty, DistanceSpec::L1_SUM, SolverConfig::default()).is_err());
        with(SolverConfig::default(), |l| {
            assert!(matches!(l.solve_il(0), Err(InverseError::InvalidArgument(_))));
            assert!(matches!(l.solve_bil(9), Err(InverseError::InvalidArgument(_))));
        });
    }
}
