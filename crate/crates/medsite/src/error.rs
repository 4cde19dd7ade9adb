use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a precondition (bad coordinate, empty list, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// No feasible solution exists under the requested constraints.
    #[error("infeasible: site {site} cannot be assigned to any center")]
    Infeasible { site: u32 },

    /// Problem too large for the requested exact method.
    #[error("problem size {size} exceeds exact-solver limit {limit}; use the greedy solver")]
    SizeLimit { size: usize, limit: usize },

    /// An internal contract between modules was broken (e.g. an assignment
    /// pointing at a closed center).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
