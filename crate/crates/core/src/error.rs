use thiserror::Error;

use crate::topo::Conflict;

pub type Result<T> = std::result::Result<T, ReconError>;

#[derive(Debug, Error)]
pub enum ReconError {
    #[error("invalid knowledge: pair ({0}, {1}) is listed both as an edge and as a non-edge")]
    ContradictoryKnowledge(usize, usize),

    #[error("invalid knowledge: self-loop ({0}, {0})")]
    SelfLoopKnowledge(usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("dimension mismatch: expected {expected} vertices, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("graph has a self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(Conflict),

    #[error("no completion of the ambiguous cells around vertices {vertices:?} matches the common-neighbors matrix")]
    NoConsistentCompletion { vertices: Vec<usize> },

    #[error("capacity exceeded: {needed} > limit {limit} ({what})")]
    Capacity {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("eigendecomposition did not converge")]
    Numerical,

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ReconError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        ReconError::Parse { line, msg: msg.into() }
    }
}
