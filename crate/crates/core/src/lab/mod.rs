//! Convergence experiments: strong sweeps, weak (σ(L∞,L¹)) integrals, the
//! weighted resolvent metric, Poisson-kernel boundary recovery, and the
//! equicontinuity probe.
//!
//! Every experiment is a pure function of its inputs. Sweep-style
//! experiments fan their cells out through [`crate::exec`] and merge the
//! results in a fixed `(t, n, vector)` order, so reports are byte-stable
//! regardless of thread count.

mod equicont;
mod metric;
mod poisson;
mod quadrature;
mod sweep;
mod weak;

pub use equicont::{equicontinuity_probe, EquicontinuityRow};
pub use metric::{resolvent_metric, resolvent_metric_seq, ResolventMetricPoint};
pub use poisson::{poisson_convolve, BoundarySamples, PoissonReconstruction};
pub use quadrature::{PhiProfile, QuadRule, Quadrature, WeightedMeasure};
pub use sweep::{
    convergence_sweep, convergence_sweep_seq, observed_order, strong_error, ConvergenceCell,
    ConvergenceReport, SeriesSummary,
};
pub use weak::{weak_integral, weak_integral_seq, WeakIntegralResult};

use std::fmt;

use crate::degenerate::FormSum;
use crate::error::Result;
use crate::linalg::{CMat, CVec};
use crate::scheme::ProductScheme;
use crate::subspace::{orth_complement, subspace_sum, Subspace};
use crate::tol;

/// Which clause of the convergence theorem applies to a probe vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorClass {
    /// `u ∈ H' = M_A ∩ M_B`: strong convergence to `exp(-itC)u`.
    HPrime,
    /// `u ∈ M_A^⊥ + M_B^⊥`: the iterates decay to zero.
    ComplementSum,
    /// Mixtures; covered by the weak statement only.
    Other,
}

impl fmt::Display for VectorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VectorClass::HPrime => "hprime",
            VectorClass::ComplementSum => "comp_sum",
            VectorClass::Other => "other",
        };
        f.write_str(s)
    }
}

/// Classifies vectors relative to `H'` and `M_A^⊥ + M_B^⊥`.
#[derive(Debug, Clone)]
pub struct VectorClassifier {
    h_prime: Subspace,
    complement_sum: Subspace,
}

impl VectorClassifier {
    pub fn new(scheme: &ProductScheme, fs: &FormSum) -> Result<Self> {
        let ca = orth_complement(scheme.a().subspace());
        let cb = orth_complement(scheme.b().subspace());
        let complement_sum = subspace_sum(&ca, &cb, tol::RANK_TOL)?;
        Ok(Self {
            h_prime: fs.h_prime().clone(),
            complement_sum,
        })
    }

    /// Membership test at relative tolerance `1e-8`; `H'` is checked first.
    pub fn classify(&self, u: &CVec) -> VectorClass {
        if self.h_prime.contains(u, tol::MEMBERSHIP) {
            VectorClass::HPrime
        } else if self.complement_sum.contains(u, tol::MEMBERSHIP) {
            VectorClass::ComplementSum
        } else {
            VectorClass::Other
        }
    }

    pub fn h_prime(&self) -> &Subspace {
        &self.h_prime
    }

    pub fn complement_sum(&self) -> &Subspace {
        &self.complement_sum
    }
}

/// `‖P'u‖` — handy for the triangle bound on strong errors.
pub(crate) fn projected_norm(p_prime: &CMat, u: &CVec) -> f64 {
    (p_prime * u).norm()
}
