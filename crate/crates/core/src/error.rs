use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A coefficient profile produced a value outside its admissible range.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// An argument lies outside the domain of the evaluated function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The envelope denominator `beta(t)ck + omega(t)^2 ctk` vanished.
    #[error("singular envelope denominator at t = {t}")]
    Singularity { t: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every violated invariant found while validating a configuration.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("product `{product}` was not computed: {reason}")]
    NotComputed { product: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
