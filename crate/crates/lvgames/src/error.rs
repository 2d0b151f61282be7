//! Shared error type for the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of range: {field} must satisfy {constraint}")]
    ParameterOutOfRange {
        field: &'static str,
        constraint: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("model variant not supported by {op}: {variant}")]
    UnsupportedModel {
        op: &'static str,
        variant: &'static str,
    },

    #[error("singular interaction structure: {0}")]
    SingularInteraction(String),

    #[error("infeasible equilibrium: component {index} is {value}")]
    InfeasibleEquilibrium { index: usize, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-positive state at t={t}: component {index} is {value}")]
    NonPositiveState { t: f64, index: usize, value: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("years must be strictly increasing (violated at data row {row})")]
    NonMonotoneYears { row: usize },

    #[error("series has no data rows")]
    EmptySeries,

    #[error("series has {0} data row(s); at least 2 are required")]
    TooFewRows(usize),

    #[error("degenerate regression design: regressor has zero variance")]
    DegenerateDesign,
}
