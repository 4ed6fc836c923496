use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is singular (smallest singular value {sigma_min:e}, threshold {threshold:e})")]
    SingularMatrix { sigma_min: f64, threshold: f64 },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("full tensor of size {size} exceeds the 2^20 oracle cap")]
    ScaleExceeded { size: u128 },

    #[error("basis size overflow")]
    Overflow,

    #[error("state is not permutation symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("state is zero")]
    ZeroState,

    #[error("cluster {cluster} needs {needed} derivative values, got {given}")]
    InsufficientDerivatives {
        cluster: usize,
        needed: usize,
        given: usize,
    },

    #[error("interpolation nodes are ill-conditioned: {0}")]
    IllConditionedNodes(String),

    #[error("no root of a matrix with eigenvalue {eigenvalue} near zero")]
    SingularRoot { eigenvalue: num_complex::Complex64 },

    #[error("local operations do not map the state into the symmetric subspace (residual {residual:e})")]
    NotSymmetricImage { residual: f64 },

    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
