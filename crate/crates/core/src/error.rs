use thiserror::Error;

/// Every failure the library can report.
///
/// Numeric payloads are widened to `f64` so the error type stays independent of the scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "matrix is singular: pivot magnitude {pivot:e} is at or below threshold {threshold:e}"
    )]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error(
        "generalized Vandermonde matrix is singular (pivot {pivot:e}, threshold {threshold:e}); \
         such matrices are invertible for distinct eigenvalue clusters, so this indicates a \
         root-clustering failure upstream (two clusters likely represent the same eigenvalue)"
    )]
    VandermondeSingular { pivot: f64, threshold: f64 },

    #[error(
        "zero eigenvalue (|lambda| = {magnitude:e}): flows exist only for invertible matrices"
    )]
    ZeroEigenvalue { magnitude: f64 },

    #[error("root finder did not converge after {sweeps} sweeps (last step {last_step:e})")]
    NonConvergence { sweeps: usize, last_step: f64 },

    #[error("relation does not annihilate the matrix: relative residual {residual:e} exceeds {tolerance:e}")]
    RelationInvalid { residual: f64, tolerance: f64 },

    #[error(
        "minimal polynomial degree is numerically ambiguous at degree {degree}: \
         dependence measure {measure:e} is within a factor 10 of rank tolerance {rank_tol:e}"
    )]
    AmbiguousDegree {
        degree: usize,
        measure: f64,
        rank_tol: f64,
    },

    #[error("matrix is not in Jordan form: {0}")]
    NotJordanForm(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("invalid tolerance: {0} must be strictly positive")]
    InvalidTolerance(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = FlowError> = std::result::Result<T, E>;
