use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("precision target unreachable: {0}")]
    Precision(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coefficient ratio is singular at a = {a}")]
    SingularRatio { a: f64 },
    #[error("no sign change found: {0}")]
    Bracket(String),
    #[error("iteration did not converge: {0}")]
    Convergence(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("step control failed: {0}")]
    Tolerance(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
