use thiserror::Error;

use crate::model::{InstanceViolation, StateId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<InstanceViolation>),

    #[error("invalid state set: {0}")]
    InvalidStateSet(String),

    #[error("job {job} starting at interval {interval} does not fit in the horizon")]
    OutOfRange { job: usize, interval: usize },

    #[error("schedule has {found} {what}, expected {expected}")]
    ScheduleShape {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("undefined transition in Ω at interval {interval}: ({from:?}, {to:?})")]
    UndefinedTransition {
        interval: usize,
        from: StateId,
        to: StateId,
    },

    #[error("no feasible processing window")]
    NoProcessingWindow,

    #[error("no switching exists between intervals {from} and {to}")]
    NoSwitching { from: usize, to: usize },

    #[error("inconsistent placement: {0}")]
    InconsistentPlacement(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("infeasible window: job {job} has no admissible start interval")]
    InfeasibleWindow { job: usize },

    #[error("interval {interval} cannot be covered by any job or space variable")]
    Uncoverable { interval: usize },

    #[error("non-integral assignment: {name} = {value}")]
    NonIntegral { name: String, value: f64 },

    #[error("cover violated at interval {interval} (covered {count} times)")]
    CoverViolated { interval: usize, count: usize },

    #[error("job {job} is assigned {count} start intervals")]
    AssignmentViolated { job: usize, count: usize },

    #[error("recomputed TEC {recomputed} differs from model objective {objective}")]
    TecMismatch { recomputed: u64, objective: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[InstanceViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
