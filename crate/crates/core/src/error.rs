use thiserror::Error;

/// Errors raised by the model layer when inputs are structurally inconsistent.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("plan/allocation mismatch: {0}")]
    PlanMismatch(String),
    #[error("no allocation, price undefined")]
    NoAllocation,
    #[error("unbounded horizon: supplier {supplier} has zero capacity for item {item}")]
    UnboundedHorizon { supplier: usize, item: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Errors raised while solving a supplier subproblem or a bi-level instance.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("infeasible subproblem: {0}")]
    Infeasible(String),
    #[error("budget exceeded after {visited} states (limit {limit})")]
    BudgetExceeded { visited: u64, limit: u64 },
    #[error("instance rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("internal error: {0}")]
    Internal(String),
}
