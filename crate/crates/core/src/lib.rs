//! Inverse learning for linear programs with unknown objectives.
//!
//! Given a polyhedron split into *relevant* and *trivial* rows and a batch of
//! observed decisions (feasible or not), the solvers here find the closest
//! feasible point that some nonzero cost makes optimal, optionally forcing a
//! chosen number of relevant rows to bind, and then recover the cost vector
//! that best explains the observations.
//!
//! The crate is `no_std` with `alloc`; file formats, the CLI and the HTTP
//! service live in the `invlearn` crate.

#![no_std]

extern crate alloc;

mod combinatorics;
mod config;
pub mod diet;
pub mod fixtures;
pub mod inverse;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod nnls;
pub mod utility;

pub use config::{CostNorm, SolverConfig};
pub use inverse::{
    Frontier, FrontierPoint, FrontierStatus, InverseError, InverseLearner, InverseSolution, Method, MilWeights,
    SequenceStep, SweepMode,
};
pub use lp::{DistanceEncoding, DistanceSpec};
pub use model::{
    check_learning_point, observation_stats, validate_instance, ConstraintKind, ForwardInstance, LinearConstraint,
    ModelError, ObservationSet, OptimalityCertificate, Sense, ValidationReport,
};
pub use utility::{build_cone, certify, infer_cost, CostCone, Exactness, InferredCost, UtilityError};

/// Version string embedded in every serialized result.
pub const ENGINE_VERSION: &str = concat!("invlearn-core/", env!("CARGO_PKG_VERSION"));
