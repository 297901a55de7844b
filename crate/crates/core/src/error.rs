use std::io;

use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("flow conservation violated at infoset {infoset}: residual {residual:e}")]
    FlowViolation { infoset: usize, residual: f64 },

    #[error("invalid treeplex: {0}")]
    InvalidTreeplex(String),

    #[error("unsupported game parameter: {0}")]
    UnsupportedParameter(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("exploitability {0:e} is below the numerical floor")]
    NegativeExploitability(f64),

    #[error("no iterations have been run yet")]
    NoIterations,

    #[error("unknown game id `{0}`")]
    UnknownGame(String),

    #[error("unknown algorithm id `{0}`")]
    UnknownAlgorithm(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
