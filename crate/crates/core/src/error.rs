use qvir_arith::ArithError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{what} = {value} exceeds the configured bound {max}")]
    Bound { what: String, value: i64, max: i64 },
    #[error("output level {level} exceeds the truncation level {max}")]
    Truncation { level: i64, max: i64 },
    #[error("kernel has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("too many sample points hit a pole")]
    Resample,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
