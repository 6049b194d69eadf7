//! Weak (σ(L∞,L¹)) convergence integrals:
//! `∫ φ(t) F(it/n)^n u dt` against `∫ φ(t) exp(-itC) P'u dt`.
//!
//! Unlike the strong statement, this mode holds for every vector in the
//! ambient space, which is exactly what the experiment probes.

use crate::degenerate::FormSum;
use crate::error::{Error, Result};
use crate::exec::run_indexed;
use crate::lab::quadrature::{PhiProfile, Quadrature};
use crate::linalg::{CVec, C64};
use crate::scheme::ProductScheme;

#[derive(Debug, Clone)]
pub struct WeakIntegralResult {
    pub lhs: CVec,
    pub rhs: CVec,
    pub gap: f64,
    /// Sanity ceiling `(∫ φ) · 2‖u‖`: both integrands are contractions of u.
    pub ceiling: f64,
}

pub fn weak_integral(
    scheme: &ProductScheme,
    fs: &FormSum,
    phi: &PhiProfile,
    u: &CVec,
    n: u64,
    q: &Quadrature,
) -> Result<WeakIntegralResult> {
    weak_impl(scheme, fs, phi, u, n, q, false)
}

pub fn weak_integral_seq(
    scheme: &ProductScheme,
    fs: &FormSum,
    phi: &PhiProfile,
    u: &CVec,
    n: u64,
    q: &Quadrature,
) -> Result<WeakIntegralResult> {
    weak_impl(scheme, fs, phi, u, n, q, true)
}

fn weak_impl(
    scheme: &ProductScheme,
    fs: &FormSum,
    phi: &PhiProfile,
    u: &CVec,
    n: u64,
    q: &Quadrature,
    sequential: bool,
) -> Result<WeakIntegralResult> {
    let (lo, hi) = q.interval();
    let needed = phi.min_points(lo, hi);
    if q.points() < needed {
        return Err(Error::QuadratureUnderResolved {
            needed,
            got: q.points(),
        });
    }
    let nodes = q.nodes();
    let samples: Vec<Result<(CVec, CVec)>> = run_indexed(nodes.len(), sequential, |i| {
        let t = nodes[i];
        let weight = C64::new(phi.density(t), 0.0);
        let approx = scheme.apply_power(t, n, u)? * weight;
        let target = fs.apply_group(t, u) * weight;
        Ok((approx, target))
    });
    let mut lhs_samples = Vec::with_capacity(nodes.len());
    let mut rhs_samples = Vec::with_capacity(nodes.len());
    for s in samples {
        let (a, b) = s?;
        lhs_samples.push(a);
        rhs_samples.push(b);
    }
    let lhs = q.combine(&lhs_samples);
    let rhs = q.combine(&rhs_samples);
    let gap = (&lhs - &rhs).norm();
    let phi_mass = q.integrate_scalar(|t| phi.density(t));
    let ceiling = 2.0 * u.norm() * phi_mass;
    assert!(
        gap <= ceiling * (1.0 + 1e-9) + 1e-12,
        "weak gap {gap:.3e} above sanity ceiling {ceiling:.3e}"
    );
    Ok(WeakIntegralResult {
        lhs,
        rhs,
        gap,
        ceiling,
    })
}
