use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed graph cache: {0}")]
    Cache(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid degree sequence: {0}")]
    InvalidSequence(String),

    #[error("degenerate sequence, slope undefined")]
    DegenerateFit,

    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("generator exhausted {restarts} restarts: {diagnostics}")]
    RestartsExhausted { restarts: u32, diagnostics: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lower-bound hypothesis violated: eps = {eps} must be below alpha^2/(1+alpha) = {limit}")]
    HypothesisViolated { eps: f64, limit: f64 },

    #[error("curves have mismatched eps grids")]
    MismatchedGrids,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
