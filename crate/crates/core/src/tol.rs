//! Numerical tolerances used across the crate.
//!
//! Construction-time invariants (orthonormality, Hermitian symmetry) sit a
//! few digits above f64 roundoff; contract tolerances on composite
//! operations (reconstruction, resolvent residuals) allow for accumulation.

/// `‖Q†Q - I‖` allowed on orthonormal bases.
pub const ORTHONORMALITY: f64 = 1e-12;

/// Relative asymmetry `‖M - M†‖/‖M‖` silently symmetrized away; above it the
/// input is rejected as non-Hermitian.
pub const HERMITIAN_REL: f64 = 1e-12;

/// Relative reconstruction residual `‖V diag(λ) V† - M‖ / ‖M‖` of a
/// spectral decomposition.
pub const RECONSTRUCTION_REL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLIP, 0)` are clipped to 0 to preserve positive
/// semidefiniteness under roundoff.
pub const PSD_CLIP: f64 = 1e-12;

/// Relative eigenvalue floor below which an operator is rejected as
/// genuinely indefinite rather than clipped.
pub const NOT_PSD_REL: f64 = 1e-8;

/// Default rank tolerance for subspace intersections and sums.
pub const RANK_TOL: f64 = 1e-8;

/// Half-plane edge: `Re z ∈ [-DOMAIN_EDGE, 0)` is clipped onto the boundary,
/// anything further left is a domain violation.
pub const DOMAIN_EDGE: f64 = 1e-12;

/// Slack on contraction bounds `‖·‖ ≤ 1`.
pub const CONTRACTION_SLACK: f64 = 1e-10;

/// Relative residual contract of the regularized resolvent solve.
pub const RESOLVENT_RESIDUAL: f64 = 1e-10;

/// Relative distance at which a vector counts as a member of a subspace.
pub const MEMBERSHIP: f64 = 1e-8;

/// Final-error threshold for the `converged` flag of a sweep.
pub const CONV_TOL: f64 = 1e-3;

/// Allowed deviation `|f'(+0) + 1|` of the extrapolated boundary derivative.
pub const KATO_DERIV: f64 = 1e-4;

/// Slack on `|f| ≤ 1` over the sampled half-plane grid.
pub const KATO_MODULUS: f64 = 1e-10;

/// Slack on real-axis conditions `0 ≤ f(s) ≤ 1`, `Im f(s) = 0`.
pub const KATO_REAL_AXIS: f64 = 1e-12;
