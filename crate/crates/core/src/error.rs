use thiserror::Error;

/// Errors raised by the analytic engine and the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("exact coefficient expansion is capped at n = {cap} (requested n = {requested})")]
    CoefficientCap { requested: usize, cap: usize },

    #[error("selection-combining sum supports n <= {max} (requested n = {requested}); use the simulator estimator instead")]
    PrecisionExhausted { requested: usize, max: usize },

    #[error("naive estimator needs {requested} antennas but the configuration samples {available}")]
    InsufficientAntennas { requested: usize, available: usize },

    #[error("degenerate variance: estimated success probability is {0}, correlation is undefined")]
    DegenerateVariance(f64),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
