use thiserror::Error;

use crate::symdelta::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid complex: {}", join(.0))]
    InvalidComplex(Vec<Violation>),

    #[error("maps are not parallel: {0}")]
    NotParallel(String),

    #[error("not a complex map: {0}")]
    InvalidMap(String),

    #[error("cone complex does not have a unique vertex ({0} zero-dimensional cones)")]
    NotUniqueVertex(usize),

    #[error("subdivision targets are not closed: {0}")]
    TargetNotClosed(String),

    #[error("subdivision centers overlap inside cone {0}")]
    OverlappingCenters(String),

    #[error("not a free face: {0}")]
    NotAFreeFace(String),

    #[error("incompatible boundary: {0}")]
    IncompatibleBoundary(String),

    #[error("malformed strata: {0}")]
    MalformedStrata(String),

    #[error("invalid annotation: {0}")]
    InvalidAnnotation(String),

    #[error("unknown component: {0}")]
    UnknownComponent(String),

    #[error("certificate replay failed at move {index}: {reason}")]
    Replay { index: usize, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
