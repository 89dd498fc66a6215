use thiserror::Error;

/// Errors produced by mesh construction, assembly, and the linear algebra
/// kernels. Nonlinear non-convergence is reported through solve reports,
/// not through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entry ({row}, {col}) out of range for a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is singular: {0}")]
    SingularMatrix(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nonlinear solve failed to converge at time step {step} (t = {time})")]
    TransientStepFailed { step: usize, time: f64 },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
