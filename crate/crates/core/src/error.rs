use thiserror::Error;

/// Errors raised by the evaluators, solvers and the batch front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An evaluation point lies outside the open domain of the operation
    /// (a coordinate pole, τ ≤ 0, a singular weight, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates the precondition of an operation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Downward Romanovski recurrence hit a vanishing denominator.
    #[error("degenerate recurrence at coefficient k = {k} (degree {degree})")]
    Degenerate { k: usize, degree: usize },

    /// The requested weighted integral does not converge.
    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("no convergence after {iterations} iterations: {what}")]
    Convergence { what: String, iterations: usize },

    /// Evaluation touched a branch point of a complex power.
    #[error("branch cut: {0}")]
    BranchCut(String),

    #[error("config error in field `{field}`: {reason}")]
    Config { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
