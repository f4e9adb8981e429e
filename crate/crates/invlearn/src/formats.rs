//! JSON and CSV encodings of instances, observations and results.
//!
//! Every result document carries `engine_version` and is serialized through
//! [`to_json`], so the CLI and the HTTP service emit identical bytes.

use std::collections::BTreeMap;

use invlearn_core::inverse::{Frontier, InverseSolution};
use invlearn_core::model::{ConstraintKind, PercentileTable, ValidationReport};
use invlearn_core::{ForwardInstance, InferredCost, LinearConstraint, ModelError, ObservationSet, Sense, ENGINE_VERSION};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Malformed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Diet(#[from] invlearn_core::diet::DietError),
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SenseDoc {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDoc {
    Relevant,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub name: String,
    pub coeffs: Vec<f64>,
    pub sense: SenseDoc,
    pub rhs: f64,
    pub kind: KindDoc,
    #[serde(default)]
    pub preferred: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub variables: Vec<String>,
    pub constraints: Vec<ConstraintDoc>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &ForwardInstance) -> Self {
        Self {
            variables: inst.variables().to_vec(),
            constraints: inst
                .constraints()
                .iter()
                .map(|c| ConstraintDoc {
                    name: c.name.clone(),
                    coeffs: c.coeffs.clone(),
                    sense: match c.sense {
                        Sense::Le => SenseDoc::Le,
                        Sense::Ge => SenseDoc::Ge,
                    },
                    rhs: c.rhs,
                    kind: match c.kind {
                        ConstraintKind::Relevant => KindDoc::Relevant,
                        ConstraintKind::Trivial => KindDoc::Trivial,
                    },
                    preferred: c.preferred,
                })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<ForwardInstance, ModelError> {
        let rows = self
            .constraints
            .iter()
            .map(|c| LinearConstraint {
                name: c.name.clone(),
                coeffs: c.coeffs.clone(),
                sense: match c.sense {
                    SenseDoc::Le => Sense::Le,
                    SenseDoc::Ge => Sense::Ge,
                },
                rhs: c.rhs,
                kind: match c.kind {
                    KindDoc::Relevant => ConstraintKind::Relevant,
                    KindDoc::Trivial => ConstraintKind::Trivial,
                },
                preferred: c.preferred,
            })
            .collect();
        ForwardInstance::new(self.variables.clone(), rows)
    }
}

pub fn parse_instance(text: &str) -> Result<ForwardInstance, FormatError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    Ok(doc.to_instance()?)
}

pub fn instance_json(inst: &ForwardInstance) -> String {
    to_json(&InstanceDoc::from_instance(inst))
}

/// Reads observations with a header of variable names. When `variables` is
/// given, columns are matched by name and reordered to that order.
pub fn parse_observations(text: &str, variables: Option<&[String]>) -> Result<(Vec<String>, ObservationSet), FormatError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(FormatError::Malformed(String::from("observation CSV has no header")));
    }
    let order: Vec<usize> = match variables {
        None => (0..header.len()).collect(),
        Some(vars) => {
            if vars.len() != header.len() {
                return Err(FormatError::Malformed(format!(
                    "observation header has {} columns, instance has {} variables",
                    header.len(),
                    vars.len()
                )));
            }
            vars.iter()
                .map(|v| {
                    header
                        .iter()
                        .position(|h| h == v)
                        .ok_or_else(|| FormatError::Malformed(format!("observation CSV lacks column `{v}`")))
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| FormatError::Malformed(format!("observation row {}: {e}", line + 1)))?;
        if vals.len() != header.len() {
            return Err(FormatError::Malformed(format!("observation row {} has {} fields", line + 1, vals.len())));
        }
        rows.push(order.iter().map(|&i| vals[i]).collect());
    }
    let names = match variables {
        Some(v) => v.to_vec(),
        None => header,
    };
    let obs = ObservationSet::new(names.len(), rows)?;
    Ok((names, obs))
}

pub fn observations_csv(names: &[String], obs: &ObservationSet) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(names).expect("in-memory write");
    for r in obs.rows() {
        w.write_record(r.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub engine_version: String,
    pub method: String,
    pub status: String,
    pub p: usize,
    pub z: Vec<f64>,
    pub binding: Vec<String>,
    pub tight: Vec<String>,
    pub tight_trivial: Vec<String>,
    pub distance: f64,
    pub objective: f64,
    pub preferred_bound_count: usize,
    pub per_observation_eps: Vec<Vec<f64>>,
    pub big_m: BTreeMap<String, f64>,
}

impl SolutionDoc {
    pub fn new(inst: &ForwardInstance, s: &InverseSolution) -> Self {
        let trivial: Vec<&LinearConstraint> = inst.trivial_rows().collect();
        Self {
            engine_version: String::from(ENGINE_VERSION),
            method: String::from(s.method.as_str()),
            status: String::from("OK"),
            p: s.p,
            z: s.z.clone(),
            binding: s.selected_names(inst),
            tight: s.tight_names(inst),
            tight_trivial: s.tight_trivial.iter().map(|&t| trivial[t].name.clone()).collect(),
            distance: s.distance,
            objective: s.objective,
            preferred_bound_count: s.preferred_bound_count,
            per_observation_eps: s.per_observation_eps.clone(),
            big_m: s.big_m.iter().enumerate().map(|(j, m)| (inst.relevant(j).name.clone(), *m)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierPointDoc {
    pub p: usize,
    pub status: String,
    pub solution: Option<SolutionDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierDoc {
    pub engine_version: String,
    pub mode: String,
    pub points: Vec<FrontierPointDoc>,
}

impl FrontierDoc {
    pub fn new(inst: &ForwardInstance, f: &Frontier) -> Self {
        Self {
            engine_version: String::from(ENGINE_VERSION),
            mode: String::from(match f.mode {
                invlearn_core::SweepMode::Independent => "independent",
                invlearn_core::SweepMode::Dependent => "dependent",
            }),
            points: f
                .points
                .iter()
                .map(|pt| FrontierPointDoc {
                    p: pt.p,
                    status: String::from(pt.status.as_str()),
                    solution: pt.solution.as_ref().map(|s| SolutionDoc::new(inst, s)),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InferredCostDoc {
    pub engine_version: String,
    pub z: Vec<f64>,
    pub c: Vec<f64>,
    pub lambda: BTreeMap<String, f64>,
    pub avg_objective: f64,
    pub exactness: String,
}

impl InferredCostDoc {
    pub fn new(inst: &ForwardInstance, z: &[f64], rows: &[usize], r: &InferredCost) -> Self {
        Self {
            engine_version: String::from(ENGINE_VERSION),
            z: z.to_vec(),
            c: r.c.clone(),
            lambda: rows.iter().zip(&r.lambda).map(|(&j, &l)| (inst.relevant(j).name.clone(), l)).collect(),
            avg_objective: r.avg_objective,
            exactness: String::from(r.exactness.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableStats {
    pub variable: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub engine_version: String,
    pub percentiles: Vec<f64>,
    pub variables: Vec<VariableStats>,
}

impl StatsDoc {
    pub fn new(names: &[String], t: &PercentileTable) -> Self {
        Self {
            engine_version: String::from(ENGINE_VERSION),
            percentiles: t.percentiles.clone(),
            variables: names
                .iter()
                .zip(&t.values)
                .map(|(n, v)| VariableStats { variable: n.clone(), values: v.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub engine_version: String,
    pub status: String,
    pub feasible: bool,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub preferred: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationDoc {
    pub fn new(r: &ValidationReport) -> Self {
        Self {
            engine_version: String::from(ENGINE_VERSION),
            status: String::from("VALID"),
            feasible: r.feasible,
            n: r.n,
            m1: r.m1,
            m2: r.m2,
            preferred: r.preferred.clone(),
            warnings: r.warnings.clone(),
        }
    }
}

/// Body of every failed request and of failed CLI runs on stderr.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub engine_version: String,
    pub status: String,
    pub message: String,
}

impl ErrorDoc {
    pub fn new(status: &str, message: impl Into<String>) -> Self {
        Self { engine_version: String::from(ENGINE_VERSION), status: String::from(status), message: message.into() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use invlearn_core::fixtures::{toy_instance, toy_observations};

    #[test]
    fn instance_round_trip() {
        let inst = toy_instance();
        let text = instance_json(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert!(text.contains("\"sense\": \"<=\""));
        assert!(text.contains("\"kind\": \"relevant\""));
    }

    #[test]
    fn preferred_defaults_to_false() {
        let text = r#"{"variables":["a"],"constraints":[{"name":"c","coeffs":[1],"sense":">=","rhs":0,"kind":"trivial"}]}"#;
        let inst = parse_instance(text).unwrap();
        assert!(!inst.constraints()[0].preferred);
    }

    #[test]
    fn bad_instances_are_rejected() {
        assert!(matches!(parse_instance("{"), Err(FormatError::Json(_))));
        let text = r#"{"variables":["a"],"constraints":[{"name":"c","coeffs":[1,2],"sense":"<=","rhs":0,"kind":"trivial"}]}"#;
        assert!(matches!(parse_instance(text), Err(FormatError::Model(_))));
        let text = r#"{"variables":["a"],"constraints":[{"name":"c","coeffs":[1],"sense":"==","rhs":0,"kind":"trivial"}]}"#;
        assert!(parse_instance(text).is_err());
    }

    #[test]
    fn observations_round_trip_and_reorder() {
        let names = vec![String::from("x1"), String::from("x2")];
        let obs = toy_observations();
        let text = observations_csv(&names, &obs);
        assert_eq!(text, "x1,x2\n9,9\n11,9\n10,8\n");
        let (_, back) = parse_observations(&text, Some(&names)).unwrap();
        assert_eq!(back, obs);
        let swapped = "x2,x1\n9,9\n9,11\n8,10\n";
        let (_, back) = parse_observations(swapped, Some(&names)).unwrap();
        assert_eq!(back, obs);
        assert!(parse_observations("x1,x3\n1,2\n", Some(&names)).is_err());
        assert!(parse_observations("x1,x2\n1,abc\n", None).is_err());
    }

    #[test]
    fn header_only_csv_is_an_empty_set() {
        let (_, obs) = parse_observations("x1,x2\n", None).unwrap();
        assert!(obs.is_empty());
    }
}
