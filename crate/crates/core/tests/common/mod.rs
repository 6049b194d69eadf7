//! Seeded random builders shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use trotter_lab::{CMat, CVec, DegenerateOperator, Subspace, C64};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn unit_vector(rng: &mut impl Rng, d: usize) -> CVec {
    let mut v = CVec::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v /= C64::new(n, 0.0);
    v
}

/// Haar-like subspace: thin QR of a complex Gaussian `d×k` matrix.
pub fn haar_subspace(rng: &mut impl Rng, d: usize, k: usize) -> Subspace {
    if k == 0 {
        return Subspace::zero(d);
    }
    let q = gaussian_matrix(rng, d, k).qr().q();
    Subspace::new(q).expect("QR factor is orthonormal")
}

/// Random Hermitian matrix (not necessarily PSD).
pub fn hermitian(rng: &mut impl Rng, d: usize) -> CMat {
    let m = gaussian_matrix(rng, d, d);
    (&m + m.adjoint()).scale(0.5)
}

/// Random Hermitian PSD matrix with eigenvalues uniform in `[0, bound]`.
pub fn psd(rng: &mut impl Rng, d: usize, bound: f64) -> CMat {
    if d == 0 {
        return CMat::zeros(0, 0);
    }
    let u = gaussian_matrix(rng, d, d).qr().q();
    let mut m = CMat::zeros(d, d);
    for j in 0..d {
        let l = rng.gen_range(0.0..bound);
        let col = u.column(j).into_owned();
        m += &col * col.adjoint() * C64::new(l, 0.0);
    }
    (&m + m.adjoint()).scale(0.5)
}

/// Random degenerate operator on a Haar `k`-dim subspace of `ℂ^d`.
pub fn degenerate_op(rng: &mut impl Rng, d: usize, k: usize, bound: f64) -> DegenerateOperator {
    let s = haar_subspace(rng, d, k);
    let m = psd(rng, k, bound);
    DegenerateOperator::new(s, m).expect("constructed PSD operator is valid")
}

/// Vector drawn inside a given subspace (zero vector when `k = 0`).
pub fn vector_in(rng: &mut impl Rng, s: &Subspace) -> CVec {
    let d = s.ambient_dim();
    if s.dim() == 0 {
        return CVec::zeros(d);
    }
    let coeff = CVec::from_fn(s.dim(), |_, _| gaussian(rng));
    let mut v = s.basis() * coeff;
    let n = v.norm();
    if n > 0.0 {
        v /= C64::new(n, 0.0);
    }
    v
}
