use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("duplicate edge {0} -> {1} (1-based)")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at node {0} (1-based)")]
    SelfLoop(usize),

    #[error("operation requires an undirected graph; use magnetic_laplacian for directed input")]
    DirectedGraph,

    #[error("node {0} (1-based) has zero degree")]
    ZeroDegree(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("vectors are not orthonormal (max Gram residual {0:e})")]
    NotOrthonormal(f64),

    #[error("solver diverged: {0}")]
    Divergence(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
