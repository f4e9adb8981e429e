//! Request handling shared by the CLI and the HTTP service.

use invlearn_core::lp::{Aggregation, Norm};
use invlearn_core::model::{observation_stats, validate_instance};
use invlearn_core::{
    build_cone, infer_cost, DistanceSpec, ForwardInstance, InverseError, InverseLearner, MilWeights, ModelError,
    ObservationSet, SolverConfig, SweepMode, UtilityError,
};
use serde::{Deserialize, Serialize};

use crate::formats::{ErrorDoc, FormatError, FrontierDoc, InferredCostDoc, SolutionDoc, StatsDoc, ValidationDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Bil,
    Alg1,
    #[default]
    Il,
    Seq,
    Mil,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    #[default]
    L1,
    Linf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AggregationArg {
    #[default]
    Sum,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    #[default]
    Independent,
    Dependent,
}

impl From<ModeArg> for SweepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Independent => SweepMode::Independent,
            ModeArg::Dependent => SweepMode::Dependent,
        }
    }
}

/// Options common to `solve` and `frontier`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveParams {
    pub method: MethodArg,
    pub p: Option<usize>,
    /// Relevant constraint name for `bil`.
    pub constraint: Option<String>,
    pub norm: NormArg,
    pub aggregation: AggregationArg,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    /// Replaces the preferred flags of the instance.
    pub preferred: Option<Vec<String>>,
}

impl SolveParams {
    pub fn spec(&self) -> DistanceSpec {
        DistanceSpec::new(
            match self.norm {
                NormArg::L1 => Norm::L1,
                NormArg::Linf => Norm::LInf,
            },
            match self.aggregation {
                AggregationArg::Sum => Aggregation::Sum,
                AggregationArg::Max => Aggregation::Max,
            },
        )
    }

    pub fn weights(&self) -> MilWeights {
        let d = MilWeights::default();
        MilWeights { omega1: self.omega1.unwrap_or(d.omega1), omega2: self.omega2.unwrap_or(d.omega2) }
    }
}

/// Failures, split by how callers report them.
#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    /// Bad input (exit 2, HTTP 400).
    Invalid { status: &'static str, message: String },
    /// The solver ran and reports a status (exit 3, HTTP 422).
    Solver { status: &'static str, message: String },
    /// Unknown resource (HTTP 404).
    NotFound(String),
    /// Anything else (exit 1, HTTP 500).
    Internal(String),
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure::Invalid { status: "MALFORMED", message: message.into() }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Failure::Invalid { status, .. } | Failure::Solver { status, .. } => status,
            Failure::NotFound(_) => "NOT_FOUND",
            Failure::Internal(_) => "INTERNAL",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid { message, .. } | Failure::Solver { message, .. } => message,
            Failure::NotFound(m) | Failure::Internal(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid { .. } | Failure::NotFound(_) => 2,
            Failure::Solver { .. } => 3,
            Failure::Internal(_) => 1,
        }
    }

    pub fn doc(&self) -> ErrorDoc {
        ErrorDoc::new(self.status(), self.message())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let message = e.to_string();
        match e {
            ModelError::InfeasibleRegion => Failure::Solver { status: "INFEASIBLE_REGION", message },
            ModelError::EmptySet => Failure::Invalid { status: "EMPTY_SET", message },
            ModelError::InvalidPercentile(_) => Failure::Invalid { status: "INVALID_PERCENTILE", message },
            ModelError::UnknownConstraint(_) => Failure::Invalid { status: "UNKNOWN_CONSTRAINT", message },
            ModelError::ZeroCost => Failure::Invalid { status: "ZERO_COST", message },
            ModelError::Malformed(_) => Failure::Invalid { status: "MALFORMED", message },
            ModelError::Lp(_) => Failure::Solver { status: "NUMERICAL_FAILURE", message },
        }
    }
}

impl From<InverseError> for Failure {
    fn from(e: InverseError) -> Self {
        let message = e.to_string();
        match e {
            InverseError::InfeasibleAtP { .. } => Failure::Solver { status: "INFEASIBLE_AT_P", message },
            InverseError::AllInfeasible => Failure::Solver { status: "ALL_INFEASIBLE", message },
            InverseError::HyperplaneMissed { .. } => Failure::Solver { status: "INFEASIBLE_AT_P", message },
            InverseError::NoPreferred => Failure::Invalid { status: "NO_PREFERRED", message },
            InverseError::InvalidArgument(_) => Failure::Invalid { status: "INVALID_ARGUMENT", message },
            InverseError::Unbounded => Failure::Internal(message),
            InverseError::Model(m) => m.into(),
            InverseError::Lp(_) => Failure::Solver { status: "NUMERICAL_FAILURE", message },
        }
    }
}

impl From<UtilityError> for Failure {
    fn from(e: UtilityError) -> Self {
        let message = e.to_string();
        match e {
            UtilityError::EmptyCone => Failure::Solver { status: "EMPTY_CONE", message },
            UtilityError::InfeasiblePoint => Failure::Invalid { status: "INFEASIBLE_POINT", message },
            UtilityError::EmptySet => Failure::Invalid { status: "EMPTY_SET", message },
            UtilityError::NotOptimal => Failure::Solver { status: "NOT_OPTIMAL", message },
            UtilityError::Model(m) => m.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Model(m) => m.into(),
            e => Failure::invalid(e.to_string()),
        }
    }
}

fn with_preferred(inst: &ForwardInstance, params: &SolveParams) -> Result<ForwardInstance, Failure> {
    match &params.preferred {
        Some(names) => Ok(inst.with_preferred(names)?),
        None => Ok(inst.clone()),
    }
}

fn required_p(params: &SolveParams) -> Result<usize, Failure> {
    params.p.ok_or_else(|| Failure::Invalid { status: "INVALID_ARGUMENT", message: String::from("`p` is required") })
}

pub fn run_validate(inst: &ForwardInstance, cfg: &SolverConfig) -> Result<ValidationDoc, Failure> {
    Ok(ValidationDoc::new(&validate_instance(inst, cfg)?))
}

pub fn run_solve(
    inst: &ForwardInstance,
    obs: &ObservationSet,
    params: &SolveParams,
    cfg: &SolverConfig,
) -> Result<SolutionDoc, Failure> {
    let inst = with_preferred(inst, params)?;
    let learner = InverseLearner::new(&inst, obs, params.spec(), *cfg)?;
    let sol = match params.method {
        MethodArg::Bil => {
            let name = params.constraint.as_deref().ok_or_else(|| Failure::Invalid {
                status: "INVALID_ARGUMENT",
                message: String::from("`constraint` is required for bil"),
            })?;
            let j = inst
                .relevant_position(name)
                .ok_or_else(|| Failure::from(ModelError::UnknownConstraint(String::from(name))))?;
            learner.solve_bil(j)?
        }
        MethodArg::Alg1 => learner.algorithm1()?.0,
        MethodArg::Il => learner.solve_il(required_p(params)?)?,
        MethodArg::Mil => learner.solve_mil(required_p(params)?, params.weights())?,
        MethodArg::Seq => {
            let p = required_p(params)?;
            let weights = params.omega1.or(params.omega2).map(|_| params.weights());
            let f = learner.sweep(1, p, SweepMode::Dependent, weights)?;
            let last = f.points.into_iter().last().expect("sweep covers 1..=p");
            match last.solution {
                Some(s) => s,
                None => {
                    let status = last.status.as_str();
                    return Err(Failure::Solver {
                        status,
                        message: format!("dependent sequence stopped before p = {p}"),
                    });
                }
            }
        }
    };
    Ok(SolutionDoc::new(&inst, &sol))
}

pub fn run_frontier(
    inst: &ForwardInstance,
    obs: &ObservationSet,
    params: &SolveParams,
    p_min: usize,
    p_max: usize,
    mode: ModeArg,
    cfg: &SolverConfig,
) -> Result<FrontierDoc, Failure> {
    let inst = with_preferred(inst, params)?;
    let learner = InverseLearner::new(&inst, obs, params.spec(), *cfg)?;
    let weights = match params.method {
        MethodArg::Mil => Some(params.weights()),
        MethodArg::Il | MethodArg::Seq => None,
        m => {
            return Err(Failure::Invalid {
                status: "INVALID_ARGUMENT",
                message: format!("frontier supports il and mil, not {m:?}"),
            })
        }
    };
    let f = learner.sweep(p_min, p_max, mode.into(), weights)?;
    Ok(FrontierDoc::new(&inst, &f))
}

pub fn run_infer_cost(
    inst: &ForwardInstance,
    obs: &ObservationSet,
    z: &[f64],
    cfg: &SolverConfig,
) -> Result<InferredCostDoc, Failure> {
    if z.len() != inst.dim() {
        return Err(Failure::invalid(format!("z has {} entries, instance has {} variables", z.len(), inst.dim())));
    }
    if obs.dim() != inst.dim() {
        return Err(Failure::invalid("observation dimension does not match the instance"));
    }
    let cone = build_cone(inst, z, cfg)?;
    let r = infer_cost(&cone, obs, cfg)?;
    Ok(InferredCostDoc::new(inst, z, &cone.rows, &r))
}

pub fn run_stats(names: &[String], obs: &ObservationSet, percentiles: &[f64]) -> Result<StatsDoc, Failure> {
    let t = observation_stats(obs, percentiles)?;
    Ok(StatsDoc::new(names, &t))
}

/// Parses `"10,25,50"`.
pub fn parse_percentiles(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Invalid { status: "INVALID_PERCENTILE", message: format!("bad percentile `{s}`") })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use invlearn_core::fixtures::{toy_instance, toy_observations};

    fn params(method: MethodArg, p: Option<usize>) -> SolveParams {
        SolveParams { method, p, ..SolveParams::default() }
    }

    #[test]
    fn solves_the_example() {
        let cfg = SolverConfig::default();
        let (inst, obs) = (toy_instance(), toy_observations());
        let s = run_solve(&inst, &obs, &params(MethodArg::Il, Some(2)), &cfg).unwrap();
        assert_eq!(s.z, vec![10.0, 10.0]);
        assert_eq!(s.status, "OK");
        let seq = run_solve(&inst, &obs, &params(MethodArg::Seq, Some(2)), &cfg).unwrap();
        assert_eq!(seq.method, "SEQ");
        let bil = SolveParams { method: MethodArg::Bil, constraint: Some(String::from("G5")), ..Default::default() };
        assert_eq!(run_solve(&inst, &obs, &bil, &cfg).unwrap().z, vec![10.0, 9.0]);
    }

    #[test]
    fn failures_map_to_statuses() {
        let cfg = SolverConfig::default();
        let (inst, obs) = (toy_instance(), toy_observations());
        let e = run_solve(&inst, &obs, &params(MethodArg::Il, Some(99)), &cfg).unwrap_err();
        assert_eq!((e.status(), e.exit_code()), ("INFEASIBLE_AT_P", 3));
        let e = run_solve(&inst, &obs, &params(MethodArg::Il, Some(0)), &cfg).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_solve(&inst, &obs, &params(MethodArg::Il, None), &cfg).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let none: Vec<String> = Vec::new();
        let mil = SolveParams { preferred: Some(none), ..params(MethodArg::Mil, Some(2)) };
        assert_eq!(run_solve(&inst, &obs, &mil, &cfg).unwrap_err().status(), "NO_PREFERRED");
        let bad = SolveParams { preferred: Some(vec![String::from("nope")]), ..params(MethodArg::Mil, Some(2)) };
        assert_eq!(run_solve(&inst, &obs, &bad, &cfg).unwrap_err().status(), "UNKNOWN_CONSTRAINT");
    }

    #[test]
    fn preferred_override_wins() {
        let cfg = SolverConfig::default();
        let (inst, obs) = (toy_instance(), toy_observations());
        let p = SolveParams { preferred: Some(vec![String::from("G4")]), omega2: Some(5.0), ..params(MethodArg::Mil, Some(2)) };
        let s = run_solve(&inst, &obs, &p, &cfg).unwrap();
        assert!(s.binding.contains(&String::from("G4")));
    }

    #[test]
    fn percentiles_parse() {
        assert_eq!(parse_percentiles("10, 50,90").unwrap(), vec![10.0, 50.0, 90.0]);
        assert!(parse_percentiles("10,x").is_err());
    }
}
