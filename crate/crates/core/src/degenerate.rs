//! Degenerate nonnegative operator pairs and their form-sum.
//!
//! A degenerate operator is a nonnegative Hermitian operator `A` defined
//! only on a closed subspace `M ⊆ ℂ^d`, stored in an orthonormal basis of
//! `M`. The form-sum `C = A ∔ B` of two such operators is the Hermitian
//! operator on `H' = M_A ∩ M_B` associated with the quadratic form
//! `u ↦ ‖A^{1/2}u‖² + ‖B^{1/2}u‖²`; in finite dimension every square-root
//! domain is the full subspace, so `H'` is the plain intersection and no
//! closure step is needed. The module also provides the limiting objects of
//! the product formula: the unitary group `exp(-itC) P'` and the resolvent
//! `(I + tC)^{-1} P'`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, hermitian_eig, CMat, CVec, C64};
use crate::subspace::{intersect, Subspace};
use crate::tol;

/// Nonnegative Hermitian operator defined on a closed subspace.
#[derive(Debug, Clone)]
pub struct DegenerateOperator {
    subspace: Subspace,
    /// `k×k` operator in the subspace basis, symmetrized and PSD-clipped.
    matrix_on_m: CMat,
    /// Ascending, all `≥ 0` after clipping.
    eigenvalues: DVector<f64>,
    /// `d×k` ambient eigenvectors `Q·V`; orthonormal columns spanning `M`.
    ambient_eigvecs: CMat,
}

impl DegenerateOperator {
    /// Builds the operator, enforcing the invariants: `matrix_on_m` must be
    /// `k×k` Hermitian within tolerance and PSD up to a relative floor of
    /// `1e-8·‖A_M‖` (eigenvalues above the floor but below 0 are clipped).
    pub fn new(subspace: Subspace, matrix_on_m: CMat) -> Result<Self> {
        let k = subspace.dim();
        if matrix_on_m.nrows() != k || matrix_on_m.ncols() != k {
            return Err(Error::ShapeMismatch {
                expected: format!("{k}x{k} operator on the subspace basis"),
                got: format!("{}x{}", matrix_on_m.nrows(), matrix_on_m.ncols()),
            });
        }
        if k == 0 {
            return Ok(Self {
                subspace,
                matrix_on_m,
                eigenvalues: DVector::zeros(0),
                ambient_eigvecs: CMat::zeros(0, 0),
            });
        }
        let asym = asymmetry(&matrix_on_m);
        if asym > tol::HERMITIAN_REL {
            return Err(Error::NonHermitian {
                asymmetry: asym,
                tol: tol::HERMITIAN_REL,
            });
        }
        let mut eig = hermitian_eig(&matrix_on_m)?;
        let scale = eig
            .eigenvalues()
            .iter()
            .fold(0.0f64, |a, &x| a.max(x.abs()));
        let floor = tol::NOT_PSD_REL * scale.max(1e-300);
        let min = eig.clip_psd(floor);
        if min < -floor {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
                threshold: floor,
            });
        }
        let matrix_on_m = eig.reconstruct();
        let ambient_eigvecs = subspace.basis() * eig.eigenvectors();
        Ok(Self {
            subspace,
            matrix_on_m,
            eigenvalues: eig.eigenvalues().clone(),
            ambient_eigvecs,
        })
    }

    /// Zero operator on the given subspace.
    pub fn zero_on(subspace: Subspace) -> Self {
        let k = subspace.dim();
        let ambient_eigvecs = subspace.basis().clone();
        Self {
            subspace,
            matrix_on_m: CMat::zeros(k, k),
            eigenvalues: DVector::zeros(k),
            ambient_eigvecs,
        }
    }

    /// Nondegenerate operator: `M` is the whole space.
    pub fn full(matrix: CMat) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(Subspace::full(d), matrix)
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn matrix_on_m(&self) -> &CMat {
        &self.matrix_on_m
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Ambient `d×k` orthonormal eigenvector frame `W = Q·V`.
    pub fn ambient_eigvecs(&self) -> &CMat {
        &self.ambient_eigvecs
    }

    pub fn projector(&self) -> CMat {
        self.subspace.projector()
    }

    /// Ambient `d×d` extension by 0 on `M^⊥`.
    pub fn embedded(&self) -> CMat {
        self.map_embedded(|l| C64::new(l, 0.0))
    }

    /// Ambient square root `A^{1/2}` extended by 0 on `M^⊥`.
    pub fn sqrt_embedded(&self) -> CMat {
        self.map_embedded(|l| C64::new(l.max(0.0).sqrt(), 0.0))
    }

    /// Ambient `h(A) P_M`: functional calculus on `M`, then 0 on `M^⊥`.
    pub fn map_embedded(&self, mut h: impl FnMut(f64) -> C64) -> CMat {
        let d = self.ambient_dim();
        let k = self.subspace.dim();
        if k == 0 {
            return CMat::zeros(d, d);
        }
        let mut scaled = self.ambient_eigvecs.clone();
        for j in 0..k {
            let v = h(self.eigenvalues[j]);
            for i in 0..d {
                scaled[(i, j)] *= v;
            }
        }
        &scaled * self.ambient_eigvecs.adjoint()
    }
}

/// The form-sum `C = A ∔ B` on `H' = M_A ∩ M_B` with projector `P'`.
#[derive(Debug, Clone)]
pub struct FormSum {
    h_prime: Subspace,
    p_prime: CMat,
    /// `k'×k'` Hermitian PSD operator in the `H'` basis.
    c_on_hprime: CMat,
    eigenvalues: DVector<f64>,
    /// `d×k'` ambient eigenvector frame of `C` inside `H'`.
    ambient_eigvecs: CMat,
}

/// Builds the form-sum with the default subspace rank tolerance.
pub fn form_sum(a: &DegenerateOperator, b: &DegenerateOperator) -> Result<FormSum> {
    form_sum_with_tol(a, b, tol::RANK_TOL)
}

/// `H'` is the intersection of the two subspaces; `C` is the compression
/// `Q'† (A_emb + B_emb) Q'` of the embedded sum. The quadratic-form
/// identity `⟨Cu, v⟩ = ⟨A^{1/2}u, A^{1/2}v⟩ + ⟨B^{1/2}u, B^{1/2}v⟩` on `H'`
/// is re-verified at construction rather than trusted; a violation aborts,
/// since it can only come from mishandled bases. An empty `H'` is legal and
/// turns every target into the zero operator.
pub fn form_sum_with_tol(
    a: &DegenerateOperator,
    b: &DegenerateOperator,
    rank_tol: f64,
) -> Result<FormSum> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::ShapeMismatch {
            expected: format!("ambient dim {}", a.ambient_dim()),
            got: format!("{}", b.ambient_dim()),
        });
    }
    let d = a.ambient_dim();
    let h_prime = intersect(a.subspace(), b.subspace(), rank_tol)?;
    let p_prime = h_prime.projector();
    let kp = h_prime.dim();
    if kp == 0 {
        return Ok(FormSum {
            h_prime,
            p_prime,
            c_on_hprime: CMat::zeros(0, 0),
            eigenvalues: DVector::zeros(0),
            ambient_eigvecs: CMat::zeros(d, 0),
        });
    }
    let q = h_prime.basis();
    let embedded_sum = a.embedded() + b.embedded();
    let c = q.adjoint() * &embedded_sum * q;
    let mut eig = hermitian_eig(&c)?;
    let scale = 1.0 + eig.eigenvalues().iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    eig.clip_psd(tol::PSD_CLIP * scale);
    let c_on_hprime = eig.reconstruct();

    // quadratic-form identity: C' == (A½Q')†(A½Q') + (B½Q')†(B½Q')
    let sa = a.sqrt_embedded() * q;
    let sb = b.sqrt_embedded() * q;
    let via_forms = sa.adjoint() * &sa + sb.adjoint() * &sb;
    let defect = (&via_forms - &c_on_hprime).norm();
    assert!(
        defect <= 1e-10 * scale,
        "form-sum quadratic-form identity violated (defect {defect:.3e}, scale {scale:.3e})"
    );

    let ambient_eigvecs = q * eig.eigenvectors();
    Ok(FormSum {
        h_prime,
        p_prime,
        c_on_hprime,
        eigenvalues: eig.eigenvalues().clone(),
        ambient_eigvecs,
    })
}

impl FormSum {
    pub fn ambient_dim(&self) -> usize {
        self.h_prime.ambient_dim()
    }

    pub fn h_prime(&self) -> &Subspace {
        &self.h_prime
    }

    pub fn p_prime(&self) -> &CMat {
        &self.p_prime
    }

    pub fn c_on_hprime(&self) -> &CMat {
        &self.c_on_hprime
    }

    pub fn dim_hprime(&self) -> usize {
        self.h_prime.dim()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Ambient `exp(-itC) P'`: unitary on `H'`, zero on `H'^⊥`.
    pub fn group(&self, t: f64) -> CMat {
        self.map_ambient(|l| (C64::new(0.0, -t * l)).exp())
    }

    /// Ambient `(I + tC)^{-1} P'`; `‖·‖ ≤ 1` for `Re t ≥ 0`.
    pub fn resolvent(&self, t: C64) -> Result<CMat> {
        self.check_resolvent_regular(t)?;
        Ok(self.map_ambient(|l| (C64::new(1.0, 0.0) + t * l).inv()))
    }

    /// `exp(-itC) P' u` without forming the ambient matrix.
    pub fn apply_group(&self, t: f64, u: &CVec) -> CVec {
        self.apply_ambient(|l| (C64::new(0.0, -t * l)).exp(), u)
    }

    /// `(I + tC)^{-1} P' u` without forming the ambient matrix.
    pub fn apply_resolvent(&self, t: C64, u: &CVec) -> Result<CVec> {
        self.check_resolvent_regular(t)?;
        Ok(self.apply_ambient(|l| (C64::new(1.0, 0.0) + t * l).inv(), u))
    }

    fn check_resolvent_regular(&self, t: C64) -> Result<()> {
        // For real spectra and Re t ≥ 0 this cannot trigger (|1 + tλ| ≥ 1);
        // for general complex t require -1/t to stay away from the spectrum.
        let floor = 1e-12 * t.norm().max(1.0);
        for &l in self.eigenvalues.iter() {
            if (C64::new(1.0, 0.0) + t * l).norm() <= floor {
                return Err(Error::SingularResolvent);
            }
        }
        Ok(())
    }

    fn map_ambient(&self, mut h: impl FnMut(f64) -> C64, ) -> CMat {
        let d = self.ambient_dim();
        let kp = self.dim_hprime();
        if kp == 0 {
            return CMat::zeros(d, d);
        }
        let mut scaled = self.ambient_eigvecs.clone();
        for j in 0..kp {
            let v = h(self.eigenvalues[j]);
            for i in 0..d {
                scaled[(i, j)] *= v;
            }
        }
        &scaled * self.ambient_eigvecs.adjoint()
    }

    fn apply_ambient(&self, mut h: impl FnMut(f64) -> C64, u: &CVec) -> CVec {
        let kp = self.dim_hprime();
        if kp == 0 {
            return CVec::zeros(self.ambient_dim());
        }
        let mut coeff = self.ambient_eigvecs.adjoint() * u;
        for j in 0..kp {
            coeff[j] *= h(self.eigenvalues[j]);
        }
        &self.ambient_eigvecs * coeff
    }
}
