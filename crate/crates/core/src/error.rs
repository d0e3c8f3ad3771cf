use thiserror::Error;

/// Residuals reported by the LP solver after a solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct Residuals {
    /// Largest violation of any equality, inequality or sign constraint.
    pub primal_infeasibility: f64,
    /// Relative gap between the primal and the independently solved dual objective.
    pub duality_gap: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("time step {k} is outside the window 1..={window}")]
    TimeStepOutOfRange { k: usize, window: usize },

    #[error("trajectory '{label}': field '{field}': {reason}")]
    InvalidTrajectory {
        label: String,
        field: &'static str,
        reason: String,
    },

    #[error("invalid trajectory set: {0}")]
    InvalidSet(String),

    #[error("invalid parameter '{name}': {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("window mismatch: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },

    #[error("state dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("problem too large: {size} exceeds the cap of {cap} ({what})")]
    TooLarge {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("LP solver failure: {reason} (infeasibility {:.3e}, gap {:.3e})", residuals.primal_infeasibility, residuals.duality_gap)]
    Solver { reason: String, residuals: Residuals },

    #[error("inequality chain violated: {0}")]
    InequalityViolation(String),

    #[error("empty batch")]
    EmptyBatch,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
