use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("incomplete jet: missing D1^{i} D2^{j} u")]
    IncompleteJet { i: usize, j: usize },

    #[error("invalid coefficient a_{i}{j}: {reason}")]
    InvalidCoefficient { i: usize, j: usize, reason: String },

    #[error("Picard iteration did not reach tolerance {tolerance:e} in {} iterations (last residual {:e})",
        history.len(), history.last().copied().unwrap_or(f64::NAN))]
    NotConverged { tolerance: f64, history: Vec<f64> },

    #[error(
        "near-singular diagonal |1 + d| = {magnitude:e} at node ({k1}, {k2}); refine the grid"
    )]
    SingularNode {
        k1: usize,
        k2: usize,
        magnitude: f64,
    },

    #[error("defect {residual:e} above tolerance {tolerance:e} after {method} solve")]
    ResidualAboveTolerance {
        method: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("convergence study needs {0}")]
    Study(String),

    #[error("schema: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
