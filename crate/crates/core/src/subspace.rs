//! Closed subspaces of `ℂ^d` as orthonormal column bases, with the algebra
//! needed by degenerate operator pairs: projectors, intersections,
//! orthogonal complements and sums.

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite_mat, hermitian_eig, CMat, CVec, C64};
use crate::tol;

/// A subspace `M ⊆ ℂ^d`, stored as a `d×k` matrix with orthonormal columns.
/// `k = 0` (the zero subspace) is legal everywhere.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Wraps an orthonormal basis; rejects columns that are not orthonormal
    /// within [`tol::ORTHONORMALITY`].
    pub fn new(basis: CMat) -> Result<Self> {
        ensure_finite_mat(&basis)?;
        let k = basis.ncols();
        if k > basis.nrows() {
            return Err(Error::ShapeMismatch {
                expected: format!("at most {} columns", basis.nrows()),
                got: format!("{}", k),
            });
        }
        let gram = basis.adjoint() * &basis;
        let defect = (&gram - CMat::identity(k, k)).norm();
        if defect > tol::ORTHONORMALITY * (k.max(1) as f64) {
            return Err(Error::InvalidParameter(format!(
                "basis columns not orthonormal: defect {defect:.3e}"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormal basis of the column span of `m`, rank determined by the
    /// column-pivoted QR diagonal relative to `rank_tol`.
    pub fn from_spanning(m: &CMat, rank_tol: f64) -> Result<Self> {
        ensure_finite_mat(m)?;
        let d = m.nrows();
        if m.ncols() == 0 || m.norm() == 0.0 {
            return Ok(Self::zero(d));
        }
        let qr = m.clone().col_piv_qr();
        let r = qr.r();
        let q = qr.q();
        let lead = r[(0, 0)].norm();
        if lead == 0.0 {
            return Ok(Self::zero(d));
        }
        let mut rank = 0;
        for i in 0..r.nrows().min(r.ncols()) {
            if r[(i, i)].norm() > rank_tol * lead {
                rank = i + 1;
            }
        }
        Ok(Self {
            basis: q.columns(0, rank).into_owned(),
        })
    }

    /// The full space `ℂ^d`.
    pub fn full(d: usize) -> Self {
        Self {
            basis: CMat::identity(d, d),
        }
    }

    /// The zero subspace of `ℂ^d`.
    pub fn zero(d: usize) -> Self {
        Self {
            basis: CMat::zeros(d, 0),
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(d: usize, indices: &[usize]) -> Self {
        let mut basis = CMat::zeros(d, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            basis[(i, j)] = C64::new(1.0, 0.0);
        }
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Orthogonal projector `P = QQ†` onto the subspace.
    pub fn projector(&self) -> CMat {
        let d = self.ambient_dim();
        if self.dim() == 0 {
            return CMat::zeros(d, d);
        }
        let p = &self.basis * self.basis.adjoint();
        // symmetrize away the last bits of roundoff
        (&p + p.adjoint()).scale(0.5)
    }

    /// Distance-based membership test: `‖(I - P)u‖ ≤ tol ‖u‖`.
    pub fn contains(&self, u: &CVec, rel_tol: f64) -> bool {
        let nu = u.norm();
        if nu == 0.0 {
            return true;
        }
        let coeff = self.basis.adjoint() * u;
        let inside = &self.basis * coeff;
        (u - inside).norm() <= rel_tol * nu
    }

    /// Coefficients of the orthogonal projection of `u` in this basis.
    pub fn coefficients(&self, u: &CVec) -> CVec {
        self.basis.adjoint() * u
    }
}

fn ensure_same_ambient(s1: &Subspace, s2: &Subspace) -> Result<()> {
    if s1.ambient_dim() == s2.ambient_dim() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            expected: format!("ambient dim {}", s1.ambient_dim()),
            got: format!("{}", s2.ambient_dim()),
        })
    }
}

/// Intersection `S₁ ∩ S₂`.
///
/// Detected through the Hermitian eigenproblem of `P₂P₁P₂`, whose
/// eigenvalues are the squared singular values of `P₁P₂`: a direction
/// belongs to the intersection iff its singular value exceeds
/// `1 - rank_tol`. The thresholds sit near 1, which keeps the detection
/// well conditioned. An empty intersection returns `k = 0`.
pub fn intersect(s1: &Subspace, s2: &Subspace, rank_tol: f64) -> Result<Subspace> {
    ensure_same_ambient(s1, s2)?;
    let d = s1.ambient_dim();
    if s1.dim() == 0 || s2.dim() == 0 {
        return Ok(Subspace::zero(d));
    }
    let p1 = s1.projector();
    let p2 = s2.projector();
    let m = &p2 * &p1 * &p2;
    let eig = hermitian_eig(&m)?;
    let cut = (1.0 - rank_tol) * (1.0 - rank_tol);
    let selected: Vec<usize> = (0..d).filter(|&i| eig.eigenvalues()[i] > cut).collect();
    let mut basis = CMat::zeros(d, selected.len());
    for (j, &i) in selected.iter().enumerate() {
        basis.set_column(j, &eig.eigenvectors().column(i));
    }
    Ok(Subspace { basis })
}

/// Orthogonal complement `S^⊥`.
pub fn orth_complement(s: &Subspace) -> Subspace {
    let d = s.ambient_dim();
    let k = s.dim();
    if k == 0 {
        return Subspace::full(d);
    }
    if k == d {
        return Subspace::zero(d);
    }
    let eig = hermitian_eig(&s.projector()).expect("projector is Hermitian by construction");
    // eigenvalues of a projector split into ≈0 and ≈1; take the d-k small ones
    debug_assert!(eig.eigenvalues()[d - k - 1] < 0.5 && eig.eigenvalues()[d - k] > 0.5);
    let mut basis = CMat::zeros(d, d - k);
    for j in 0..d - k {
        basis.set_column(j, &eig.eigenvectors().column(j));
    }
    Subspace { basis }
}

/// Sum `S₁ + S₂` (span of the union), orthonormal output.
pub fn subspace_sum(s1: &Subspace, s2: &Subspace, rank_tol: f64) -> Result<Subspace> {
    ensure_same_ambient(s1, s2)?;
    let d = s1.ambient_dim();
    let k = s1.dim() + s2.dim();
    if k == 0 {
        return Ok(Subspace::zero(d));
    }
    let mut stacked = CMat::zeros(d, k);
    for j in 0..s1.dim() {
        stacked.set_column(j, &s1.basis.column(j));
    }
    for j in 0..s2.dim() {
        stacked.set_column(s1.dim() + j, &s2.basis.column(j));
    }
    Subspace::from_spanning(&stacked, rank_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::RANK_TOL;

    fn e(d: usize, i: usize) -> CVec {
        let mut v = CVec::zeros(d);
        v[i] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn projector_of_first_coordinate() {
        let s = Subspace::coordinate(2, &[0]);
        let p = s.projector();
        assert!((p - CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        ))
        .norm()
            < 1e-15);
    }

    #[test]
    fn projector_of_zero_subspace_is_zero() {
        let s = Subspace::zero(3);
        assert_eq!(s.projector().norm(), 0.0);
    }

    #[test]
    fn coordinate_intersection() {
        let s1 = Subspace::coordinate(3, &[0, 1]);
        let s2 = Subspace::coordinate(3, &[1, 2]);
        let cap = intersect(&s1, &s2, RANK_TOL).unwrap();
        assert_eq!(cap.dim(), 1);
        assert!(cap.contains(&e(3, 1), 1e-10));
    }

    #[test]
    fn self_intersection_preserves_span() {
        let m = CMat::from_fn(4, 2, |i, j| C64::new((i + 2 * j + 1) as f64, i as f64 * 0.3));
        let s = Subspace::from_spanning(&m, RANK_TOL).unwrap();
        let cap = intersect(&s, &s, RANK_TOL).unwrap();
        assert_eq!(cap.dim(), s.dim());
        for j in 0..cap.dim() {
            let col = cap.basis().column(j).into_owned();
            assert!(s.contains(&col, 1e-10));
        }
    }

    #[test]
    fn complement_of_first_coordinate() {
        let s = Subspace::coordinate(2, &[0]);
        let c = orth_complement(&s);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(2, 1), 1e-12));
    }

    #[test]
    fn complement_of_full_space_is_zero() {
        let c = orth_complement(&Subspace::full(3));
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn sum_of_coordinates() {
        let s = subspace_sum(
            &Subspace::coordinate(2, &[0]),
            &Subspace::coordinate(2, &[1]),
            RANK_TOL,
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn sum_with_self_is_self() {
        let m = CMat::from_fn(5, 2, |i, j| C64::new(1.0 / (1.0 + (i + j) as f64), j as f64));
        let s = Subspace::from_spanning(&m, RANK_TOL).unwrap();
        let sum = subspace_sum(&s, &s, RANK_TOL).unwrap();
        assert_eq!(sum.dim(), s.dim());
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let m = CMat::from_fn(3, 2, |i, j| C64::new((i * j + 1) as f64, 0.0));
        assert!(Subspace::new(m).is_err());
    }

    #[test]
    fn mismatched_ambient_dims_rejected() {
        let s1 = Subspace::full(2);
        let s2 = Subspace::full(3);
        assert!(intersect(&s1, &s2, RANK_TOL).is_err());
        assert!(subspace_sum(&s1, &s2, RANK_TOL).is_err());
    }
}
