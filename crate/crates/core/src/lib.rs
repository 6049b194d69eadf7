//! Numerical laboratory for arithmetic-mean product formulas for unitary
//! groups on finite-dimensional complex Hilbert spaces.
//!
//! The lab studies the Trotter-type step
//!
//! ```text
//! F(t) = [ f(2tA) P_A + g(2tB) P_B ] / 2
//! ```
//!
//! built from two nonnegative Hermitian operators `A`, `B` that may live on
//! proper subspaces `M_A`, `M_B` (degenerate case), together with admissible
//! scalar functions `f`, `g` generalizing `exp(-s)`. Iterates `F(it/n)^n`
//! approximate the unitary group `exp(-itC) P'` generated by the form-sum
//! `C = A ∔ B` on the common domain `H' = M_A ∩ M_B`.
//!
//! Crate layout:
//!
//! * [`linalg`] — dense complex Hermitian spectral calculus,
//! * [`subspace`] — orthonormal bases, projectors and subspace algebra,
//! * [`kato`] — admissible scalar functions and their numerical validation,
//! * [`degenerate`] — degenerate operator pairs, form-sums and their
//!   target group/resolvent,
//! * [`scheme`] — the product-formula step, its powers, the regularization
//!   `S_{t,τ}` and the associated resolvents,
//! * [`lab`] — convergence experiments (strong sweeps, weak integrals,
//!   weighted resolvent metrics, Poisson boundary recovery,
//!   equicontinuity probes),
//! * [`io`] — JSON interchange formats, [`report`] — CSV emission.
//!
//! With the default `parallel` feature the sweep-style experiments fan out
//! over rayon; disabling it yields a fully sequential build with the same
//! results. Every experiment assembles its output in a deterministic order,
//! so reports are byte-identical regardless of thread count.

pub mod error;
pub mod exec;
pub mod io;
pub mod kato;
pub mod lab;
pub mod linalg;
pub mod report;
pub mod scheme;
pub mod subspace;
pub mod tol;

pub mod degenerate;

pub use error::{Error, Result};
pub use kato::{builtin, parse_kato_name, Builtin, HalfPlaneGrid, KatoFunction, ValidationReport};
pub use linalg::{
    apply_function, hermitian_eig, operator_norm, CMat, CVec, FunctionDomain,
    SpectralDecomposition, C64,
};
pub use scheme::ProductScheme;
pub use subspace::{intersect, orth_complement, subspace_sum, Subspace};

pub use degenerate::{form_sum, form_sum_with_tol, DegenerateOperator, FormSum};
