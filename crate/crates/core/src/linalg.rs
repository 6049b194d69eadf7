//! Dense complex Hermitian spectral calculus.
//!
//! The ambient representation of every operator is a dense square
//! [`CMat`]; everything here is desk scale (dimensions up to a few
//! hundred), so there is no sparse or iterative machinery.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Domain on which a scalar function fed to [`apply_function`] is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionDomain {
    /// Defined everywhere; evaluation points are passed through unchecked.
    Entire,
    /// Defined for `Re z ≥ 0`; points with `Re z ∈ [-1e-12, 0)` are clipped
    /// onto the boundary and anything further left is rejected.
    ClosedRightHalfPlane,
}

/// Eigendecomposition `M = V diag(λ) V†` of a Hermitian matrix, eigenvalues
/// ascending, eigenvector columns orthonormal.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: CMat,
}

pub fn ensure_finite_mat(m: &CMat) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &CMat) -> Result<()> {
    if m.nrows() == m.ncols() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.nrows(), m.ncols()),
        })
    }
}

/// Asymmetry `‖M - M†‖_F / max(‖M‖_F, 1)`. The floor keeps noise-level
/// matrices (products of projectors that are mathematically zero) from
/// reading as wildly non-Hermitian.
pub fn asymmetry(m: &CMat) -> f64 {
    (m - m.adjoint()).norm() / m.norm().max(1.0)
}

/// Hermitian spectral decomposition.
///
/// The input is symmetrized as `(M + M†)/2` when its relative asymmetry is
/// below [`tol::HERMITIAN_REL`] and rejected otherwise; this guards against
/// drift accumulating over long operator products.
pub fn hermitian_eig(m: &CMat) -> Result<SpectralDecomposition> {
    ensure_square(m)?;
    ensure_finite_mat(m)?;
    let asym = asymmetry(m);
    if asym > tol::HERMITIAN_REL {
        return Err(Error::NonHermitian {
            asymmetry: asym,
            tol: tol::HERMITIAN_REL,
        });
    }
    let d = m.nrows();
    if d == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: DVector::zeros(0),
            eigenvectors: CMat::zeros(0, 0),
        });
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm
        .symmetric_eigen()
        .try_sort()
        .ok_or_else(|| Error::NumericalFailure("eigensolver produced non-finite values".into()))?;
    Ok(eig)
}

trait TrySort {
    fn try_sort(self) -> Option<SpectralDecomposition>;
}

impl TrySort for nalgebra::SymmetricEigen<C64, nalgebra::Dyn> {
    fn try_sort(self) -> Option<SpectralDecomposition> {
        if !self.eigenvalues.iter().all(|x| x.is_finite()) {
            return None;
        }
        let d = self.eigenvalues.len();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| self.eigenvalues[i].total_cmp(&self.eigenvalues[j]));
        let eigenvalues = DVector::from_iterator(d, order.iter().map(|&i| self.eigenvalues[i]));
        let mut eigenvectors = CMat::zeros(d, d);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &self.eigenvectors.column(src));
        }
        Some(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    /// Clips eigenvalues in `[-clip, 0)` to 0. Returns the smallest
    /// eigenvalue seen before clipping.
    pub fn clip_psd(&mut self, clip: f64) -> f64 {
        let min = self.eigenvalues.min();
        for x in self.eigenvalues.iter_mut() {
            if *x < 0.0 && *x >= -clip {
                *x = 0.0;
            }
        }
        min
    }

    /// Functional calculus `h(M) = V diag(h(λ)) V†`.
    pub fn map(&self, mut h: impl FnMut(f64) -> C64) -> CMat {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let v = h(self.eigenvalues[j]);
            for i in 0..d {
                scaled[(i, j)] *= v;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMat {
        self.map(|x| C64::new(x, 0.0))
    }
}

/// Functional calculus `h(scale · M)` for Hermitian PSD `M`.
///
/// Eigenvalues in `[-1e-12, 0)` are clipped to 0 first, so functions
/// constrained to the closed right half-plane stay inside their domain.
pub fn apply_function(
    h: impl Fn(C64) -> C64,
    m: &CMat,
    scale: C64,
    domain: FunctionDomain,
) -> Result<CMat> {
    let mut eig = hermitian_eig(m)?;
    eig.clip_psd(tol::PSD_CLIP);
    let points: Vec<C64> = eig.eigenvalues.iter().map(|&l| scale * l).collect();
    let mut values = Vec::with_capacity(points.len());
    for p in &points {
        let p = match domain {
            FunctionDomain::Entire => *p,
            FunctionDomain::ClosedRightHalfPlane => clip_right_half_plane(*p)?,
        };
        let v = h(p);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite);
        }
        values.push(v);
    }
    let mut j = 0;
    Ok(eig.map(|_| {
        let v = values[j];
        j += 1;
        v
    }))
}

/// Clips `Re z ∈ [-1e-12, 0)` onto the imaginary axis; rejects points
/// further left.
pub fn clip_right_half_plane(z: C64) -> Result<C64> {
    if z.re >= 0.0 {
        Ok(z)
    } else if z.re >= -tol::DOMAIN_EDGE {
        Ok(C64::new(0.0, z.im))
    } else {
        Err(Error::DomainViolation {
            point: z,
            tol: tol::DOMAIN_EDGE,
        })
    }
}

/// Spectral operator norm `‖M‖₂ = sqrt(λ_max(M†M))`.
pub fn operator_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    // M†M is Hermitian PSD by construction; symmetrize and decompose.
    let herm = (&gram + gram.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    eig.eigenvalues.max().max(0.0).sqrt()
}

/// `m^n` by binary powering.
pub fn matrix_power(m: &CMat, n: u64) -> CMat {
    let d = m.nrows();
    let mut result = CMat::identity(d, d);
    let mut base = m.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Hermitian part `(M + M†)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// `Σ conj(u_i) v_i`.
pub fn inner(u: &CVec, v: &CVec) -> C64 {
    u.dotc(v)
}
