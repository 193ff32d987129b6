use thiserror::Error;

use crate::closures::ClosureFamily;

/// Errors raised by the column model.
#[derive(Debug, Error)]
pub enum ColumnError {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{family} closure is singular at R = {r}")]
    Singularity { family: ClosureFamily, r: f64 },

    /// Negative eddy diffusivity: the closure is not physically valid for this column.
    #[error("negative eddy diffusivity at step {step}, levels {levels:?} (z = {depths:?} m)")]
    NegativeDiffusivity {
        step: usize,
        levels: Vec<usize>,
        depths: Vec<f64>,
    },

    #[error("tridiagonal system is singular (zero pivot at row {row})")]
    SingularMatrix { row: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate forcing: surface density flux Q must be non-zero")]
    DegenerateForcing,

    #[error("no equilibrium Richardson number in (0, {r_max}]")]
    NoEquilibrium { r_max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ColumnError {
    pub fn is_model_invalid(&self) -> bool {
        matches!(self, ColumnError::NegativeDiffusivity { .. })
    }
}

pub type Result<T> = std::result::Result<T, ColumnError>;
