use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mollifier degree {0} is inadmissible: P(0) = P'(0) = 0 requires degree >= 2")]
    InadmissibleDegree(usize),

    #[error("mollifier polynomial is identically zero")]
    ZeroPolynomial,

    #[error("theta must satisfy 0 < theta <= 1/2, got {0}")]
    InvalidTheta(String),

    #[error("theta = {0} requires the generalized-theta series weights")]
    GeneralizedThetaRequired(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("main-term denominator is not positive ({0})")]
    DegenerateDenominator(String),

    #[error("series did not reach tolerance {tol:e} within {cap} terms")]
    TruncationFailure { tol: f64, cap: usize },

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("no failing gap parameter found below {0}")]
    BracketFailure(f64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unknown constant {0:?}")]
    UnknownConstant(String),

    #[error("parse error at line {line}: {content:?}")]
    Parse { line: usize, content: String },

    #[error("ordinates descend at line {line}: {value} after {previous}")]
    Order { line: usize, previous: f64, value: f64 },

    #[error("no ordinates in input")]
    EmptyInput,

    #[error("need at least two ordinates, have {0}")]
    InsufficientData(usize),

    #[error("height {t} outside table coverage (last ordinate {last})")]
    OutOfRange { t: f64, last: f64 },

    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
