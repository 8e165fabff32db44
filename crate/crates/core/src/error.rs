//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expansion at infinity has a positive-degree term v^{0}")]
    PositiveDegree(i64),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot classify module: {0}")]
    Unclassifiable(String),
    #[error("interpolation failed: {0}")]
    Interpolation(String),
    #[error("validated polynomial falsified: {0}")]
    Falsified(String),
    #[error("not unitriangular: {0}")]
    NotTriangular(String),
    #[error("no solution in v^-1 Z[v^-1]: {0}")]
    NoSolution(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
            Error::PositiveDegree(_) => "positive_degree",
            Error::DimMismatch(_) => "dim_mismatch",
            Error::Budget(_) => "budget",
            Error::Unsupported(_) => "unsupported",
            Error::Unclassifiable(_) => "unclassifiable",
            Error::Interpolation(_) => "interpolation",
            Error::Falsified(_) => "falsified",
            Error::NotTriangular(_) => "not_triangular",
            Error::NoSolution(_) => "no_solution",
            Error::Cache(_) => "cache",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
