use thiserror::Error;

/// Errors raised by the numerical routines and data loaders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input text could not be parsed as a number.
    #[error("parse error at line {line}: invalid number `{token}`")]
    Parse { line: usize, token: String },

    /// Parsed input violated a data invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A named built-in dataset or preset does not exist.
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    /// The baseline hazard does not dominate the noise amplitude.
    #[error("dominance violated: r({t}) = {hazard} <= c = {c}")]
    Dominance { t: f64, hazard: f64, c: f64 },

    /// The kernel hazard estimate is numerically meaningless at this time
    /// because the estimated survival function has vanished.
    #[error("upper-tail unstable at t = {t}: estimated survival {survival:e} below threshold")]
    UpperTailUnstable { t: f64, survival: f64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge on [{a}, {b}] (error estimate {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
