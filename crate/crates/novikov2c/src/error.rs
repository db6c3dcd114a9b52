use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// A field or intermediate quantity contains NaN or Inf.
    #[error("corrupt state: non-finite values in {context}")]
    CorruptState { context: String },

    /// Fields on different grids were combined.
    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    /// A parameter violates its documented constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A weight function overflowed at a domain point.
    #[error("weight overflow at x = {x}")]
    WeightOverflow { x: f64 },

    /// Configuration file problems, with aggregated field diagnostics.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn corrupt(context: impl Into<String>) -> Self {
        Error::CorruptState {
            context: context.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
