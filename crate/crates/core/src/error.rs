//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Relative asymmetry `‖M - M†‖ / ‖M‖` above the Hermitian tolerance.
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:.3e} > {tol:.3e}")]
    NonHermitian { asymmetry: f64, tol: f64 },

    /// An iterative kernel (eigensolver, refined solve) did not reach its
    /// accuracy contract.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("non-finite entry encountered")]
    NonFinite,

    /// Evaluation point left the closed right half-plane.
    #[error("domain violation: Re z = {} < -{tol:.1e} at z = {point}", point.re)]
    DomainViolation { point: Complex64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} < -{threshold:.3e}")]
    NotPsd { min_eigenvalue: f64, threshold: f64 },

    #[error("resolvent is singular or could not be solved to contract")]
    SingularResolvent,

    #[error("unknown name: {0:?}")]
    UnknownName(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Quadrature grid too coarse for the requested integrand profile.
    #[error("quadrature under-resolved: need at least {needed} points, got {got}")]
    QuadratureUnderResolved { needed: usize, got: usize },

    /// Boundary-sample window too narrow for the Poisson reconstruction.
    #[error("boundary grid too narrow: need half-width >= {required}, have {available}")]
    GridTooNarrow { required: f64, available: f64 },
}
