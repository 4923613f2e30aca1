use thiserror::Error;

use crate::sdp::SolveStatus;

/// Errors produced by the capability toolkit.
#[derive(Debug, Error)]
pub enum QpcError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("not a physical state or process: {0}")]
    NotPhysical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension {dim} for {what}")]
    UnsupportedDimension { what: &'static str, dim: usize },

    #[error("basis vectors are linearly dependent (smallest singular value {0:.3e})")]
    DependentBasis(f64),

    #[error("incomplete tomography record: expected {expected} outputs, found {found}")]
    IncompleteRecord { expected: usize, found: usize },

    #[error("the incapable-process constraint set is infeasible")]
    Infeasible,

    #[error("solver did not reach an optimal solution (status {0})")]
    Solver(SolveStatus),

    #[error("malformed PSD constraint: {0}")]
    MalformedConstraint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = QpcError> = std::result::Result<T, E>;
