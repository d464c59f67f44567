use thiserror::Error;

/// Errors shared by the solvers. Infeasibility and unboundedness are not
/// errors; they are reported through [`crate::SolveOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance has variable upper bounds; use the bounded solver")]
    UpperBoundsPresent,
    #[error("instance has no variable upper bounds")]
    MissingUpperBounds,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("instance data too large for this algorithm: {0}")]
    TooLarge(String),
    #[error("internal error: {0}")]
    Internal(String),
}
