use thiserror::Error;

/// Errors raised by the estimation and calibration routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or configuration value violates its precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The oracle risk over the active window is zero, so no ratio can be formed.
    #[error("oracle risk is zero on the window [{lo}, {hi}); the risk ratio is undefined")]
    ZeroOracleRisk { lo: f64, hi: f64 },

    /// Malformed input data (CSV files, point lists).
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
