use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Inputs disagree on size (permutation lengths, matrix shapes, ...).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An input carried a NaN or infinity.
    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// A parameter lies outside its documented domain.
    #[error("invalid parameter: {0}")]
    Domain(String),

    /// The input admits no meaningful answer (zero Gram matrix, constant
    /// columns where a dominant direction is required, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative solver exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
