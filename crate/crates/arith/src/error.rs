use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes the denominator vanish")]
    ZeroDenominator,
    /// The evaluation point is a pole; the caller should draw a new point.
    #[error("denominator vanishes at the evaluation point; resample")]
    Resample,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Domain(String),
}

pub type Result<T, E = ArithError> = std::result::Result<T, E>;
