//! Poisson-kernel harmonic extension: recovers interior values of a bounded
//! holomorphic half-plane function from its boundary samples,
//!
//! ```text
//! Ψ(t + is₀) = ∫ (t/π) / (t² + (s₀-s)²) Ψ(is) ds,
//! ```
//!
//! truncated to the sampled window. The kernel has unit mass on the line;
//! the mass missed outside a window of half-width `W` is below `2t/(πW)`,
//! which bounds the truncation error by `(t/π)(2/W)·max‖Ψ‖`.

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64};

/// Vector-valued boundary samples `Ψ(i s_j)` on the uniform grid
/// `s_j = s_lo + j·step`.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    pub s_lo: f64,
    pub step: f64,
    pub values: Vec<CVec>,
}

impl BoundarySamples {
    pub fn s_hi(&self) -> f64 {
        self.s_lo + self.step * (self.values.len().saturating_sub(1)) as f64
    }
}

#[derive(Debug, Clone)]
pub struct PoissonReconstruction {
    pub value: CVec,
    /// `(t/π)(2/W)·max‖Ψ‖` for the realized window half-width `W`.
    pub truncation_bound: f64,
    /// Quadrature mass of the kernel over the window; ≤ 1 up to roundoff.
    pub kernel_mass: f64,
}

/// Truncated Poisson integral at the interior point `t + i s0`, `t > 0`.
///
/// The samples must cover `[s0 - W, s0 + W]` with `W ≥ 50·t`; otherwise the
/// reconstruction would be dominated by the missing tails.
pub fn poisson_convolve(
    samples: &BoundarySamples,
    t: f64,
    s0: f64,
) -> Result<PoissonReconstruction> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "interior distance t must be positive, got {t}"
        )));
    }
    if samples.values.len() < 2 || samples.step <= 0.0 {
        return Err(Error::InvalidParameter(
            "need at least two uniformly spaced boundary samples".into(),
        ));
    }
    let window = (s0 - samples.s_lo).min(samples.s_hi() - s0);
    let required = 50.0 * t;
    if window < required {
        return Err(Error::GridTooNarrow {
            required,
            available: window,
        });
    }

    let dim = samples.values[0].len();
    let n = samples.values.len();
    let mut value = CVec::zeros(dim);
    let mut kernel_mass = 0.0;
    let mut max_norm = 0.0f64;
    for (j, psi) in samples.values.iter().enumerate() {
        let s = samples.s_lo + samples.step * j as f64;
        let x = s0 - s;
        let kernel = (t / std::f64::consts::PI) / (t * t + x * x);
        // trapezoid weights on the uniform grid
        let w = if j == 0 || j == n - 1 {
            samples.step / 2.0
        } else {
            samples.step
        };
        value += psi * C64::new(w * kernel, 0.0);
        kernel_mass += w * kernel;
        max_norm = max_norm.max(psi.norm());
    }
    let truncation_bound = (t / std::f64::consts::PI) * (2.0 / window) * max_norm;
    Ok(PoissonReconstruction {
        value,
        truncation_bound,
        kernel_mass,
    })
}
