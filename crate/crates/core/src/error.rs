use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {0}")]
    Invalid(String),

    /// No vertex split produced a 4-edge-connected support graph.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("minimum cut value is {found}, expected {expected}")]
    MinCutValue { found: usize, expected: usize },

    #[error("hierarchy invariant violated: {0}")]
    Hierarchy(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("reduced Laplacian is numerically singular (pivot ratio {ratio:e})")]
    Singular { ratio: f64 },

    #[error("fitting did not converge after {iterations} iterations (error {error:e}); try a larger epsilon")]
    NoConvergence { iterations: usize, error: f64 },

    #[error("spanning tree count {count:e} exceeds the enumeration cap {cap}")]
    TooManyTrees { count: f64, cap: usize },

    #[error("odd number of vertices ({0}) cannot be perfectly matched")]
    OddJoinSet(usize),

    #[error("parameter constraint violated: {0}")]
    Parameters(String),

    #[error("exact computation infeasible: {0}")]
    Infeasible(String),

    #[error("certificate invariant violated: {0}")]
    Certificate(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
