use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Vector/matrix dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A constraint matrix column is all zero: the corresponding variable is
    /// unconstrained, its conditional law is the plain Poisson law, and the
    /// joint partition function diverges. Drop the column instead.
    #[error("column {col} of the constraint matrix is all zero; variable X_{col} is unconstrained (its conditional law is plain Poisson) — drop the column")]
    ZeroColumn { col: usize },

    /// Invalid argument (bad index, non-positive rate, malformed window, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Conditioning on an event of probability zero.
    #[error("conditioning event has probability zero: F0(b) = 0 at b = {0}")]
    NullConditioningEvent(String),

    /// A polynomial was evaluated without a value for one of its variables.
    #[error("unbound variable `{0}` in polynomial evaluation")]
    UnboundVariable(String),

    /// The leading coefficient of a recurrence vanished at a lattice point.
    #[error("discrete singularity: leading coefficient vanishes at b = {0}")]
    DiscreteSingularity(String),

    /// Input not covered by a specialized fast path.
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    /// Text input (matrix, network file, recurrence file) failed to parse.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
