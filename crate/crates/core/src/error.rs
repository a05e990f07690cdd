use thiserror::Error;

/// Errors produced by the exact and numeric routines of this crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("InvalidInterval: left endpoint {a} must be strictly less than right endpoint {b}")]
    InvalidInterval { a: String, b: String },

    #[error("InvalidOrder: half-order n must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("SingularMatrix: exact elimination found no pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("NotSymmetric: entry ({row},{col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("Parse: {0}")]
    Parse(String),

    #[error("NonFinite: {0}")]
    NonFinite(String),

    #[error("NearSingularG0: condition number {cond:e} exceeds {limit:e}; z is too close to a Dirichlet eigenvalue")]
    NearSingularG0 { cond: f64, limit: f64 },

    #[error("InvalidExtension: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidExtension(Vec<crate::classify::Violation>),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    /// An internal consistency failure that the mathematics rules out.
    #[error("Defect: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;
