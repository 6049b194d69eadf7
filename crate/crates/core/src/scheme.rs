//! The arithmetic-mean product-formula step and its derived objects.
//!
//! For a pair of degenerate nonnegative operators `(A, M_A)`, `(B, M_B)`
//! and admissible functions `f`, `g`, the single step is
//!
//! ```text
//! F(t) = [ f(2tA) P_A + g(2tB) P_B ] / 2,      Re t ≥ 0,
//! ```
//!
//! a contraction for every admissible `f`, `g`. The factor 2 inside the
//! arguments compensates the arithmetic mean, so that
//! `F(t) = I - t(A_emb + B_emb) + O(t²)` in the nondegenerate case.
//!
//! Derived objects:
//!
//! * `F(it/n)^n u` — the product-formula iterate ([`ProductScheme::apply_power`]),
//! * `S_{t,τ} = τ^{-1}(I - F(tτ))` — the regularized generator quotient,
//!   holomorphic in `t` on the open right half-plane,
//! * `A_{t,τ} = τ^{-1}[I - f(tτA) P_A]` and its `B` counterpart — bounded
//!   accretive operators with `S_{t,τ} = A_{t,2τ} + B_{t,2τ}`,
//! * `w = (I + S_{t,τ})^{-1} u` — a contraction of `u` by accretivity,
//! * the energy identity
//!   `(u, w) = ‖w‖² + (A_{it,2τ} w, w) + (B_{it,2τ} w, w)`,
//! * the Chernoff exponential `exp(n(F(it/n) - I)) u`.

use crate::degenerate::DegenerateOperator;
use crate::error::{Error, Result};
use crate::kato::KatoFunction;
use crate::linalg::{clip_right_half_plane, inner, matrix_power, CMat, CVec, C64};
use crate::tol;

/// Above this power, `F(it/n)^n u` switches from repeated matrix–vector
/// products to binary matrix powering.
const REPEAT_APPLY_MAX: u64 = 1000;

/// An arithmetic-mean product-formula scheme with cached spectral data of
/// both operators. Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct ProductScheme {
    a: DegenerateOperator,
    b: DegenerateOperator,
    f: KatoFunction,
    g: KatoFunction,
}

impl ProductScheme {
    pub fn new(
        a: DegenerateOperator,
        b: DegenerateOperator,
        f: KatoFunction,
        g: KatoFunction,
    ) -> Result<Self> {
        if a.ambient_dim() != b.ambient_dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("ambient dim {}", a.ambient_dim()),
                got: format!("{}", b.ambient_dim()),
            });
        }
        Ok(Self { a, b, f, g })
    }

    pub fn dim(&self) -> usize {
        self.a.ambient_dim()
    }

    pub fn a(&self) -> &DegenerateOperator {
        &self.a
    }

    pub fn b(&self) -> &DegenerateOperator {
        &self.b
    }

    pub fn f(&self) -> &KatoFunction {
        &self.f
    }

    pub fn g(&self) -> &KatoFunction {
        &self.g
    }

    /// The step `F(t) = [f(2tA)P_A + g(2tB)P_B]/2` for `Re t ≥ -1e-12`
    /// (tiny negative real parts are clipped onto the axis first, so the
    /// scalar arguments `2tλ` never leave the closed half-plane).
    pub fn step(&self, t: C64) -> Result<CMat> {
        let t = clip_right_half_plane(t)?;
        let fa = self.half_factor(&self.a, &self.f, t)?;
        let fb = self.half_factor(&self.b, &self.g, t)?;
        Ok((fa + fb).scale(0.5))
    }

    /// `f(2tA) P_A` as an ambient matrix.
    fn half_factor(&self, op: &DegenerateOperator, f: &KatoFunction, t: C64) -> Result<CMat> {
        let scale = t * 2.0;
        let values: Vec<C64> = op
            .eigenvalues()
            .iter()
            .map(|&l| f.evaluate(scale * l))
            .collect::<Result<_>>()?;
        let mut j = 0;
        Ok(op.map_embedded(|_| {
            let v = values[j];
            j += 1;
            v
        }))
    }

    /// The product-formula matrix `F(it/n)^n`.
    pub fn step_power(&self, t: f64, n: u64) -> Result<CMat> {
        if n == 0 {
            return Err(Error::InvalidParameter("power n must be >= 1".into()));
        }
        let m = self.step(C64::new(0.0, t / n as f64))?;
        Ok(matrix_power(&m, n))
    }

    /// `F(it/n)^n u`: repeated matrix–vector products for moderate `n`,
    /// binary matrix powering beyond, so powers up to `10^6` and more stay
    /// interactive. Both paths agree to well below the contracts tested
    /// downstream.
    pub fn apply_power(&self, t: f64, n: u64, u: &CVec) -> Result<CVec> {
        if n == 0 {
            return Err(Error::InvalidParameter("power n must be >= 1".into()));
        }
        let m = self.step(C64::new(0.0, t / n as f64))?;
        if n <= REPEAT_APPLY_MAX {
            let mut w = u.clone();
            for _ in 0..n {
                w = &m * w;
            }
            Ok(w)
        } else {
            Ok(matrix_power(&m, n) * u)
        }
    }

    /// Regularized generator quotient `S_{t,τ} = τ^{-1}(I - F(tτ))`.
    pub fn regularization(&self, t: C64, tau: f64) -> Result<CMat> {
        ensure_positive_tau(tau)?;
        let d = self.dim();
        let f = self.step(t * tau)?;
        Ok((CMat::identity(d, d) - f).scale(1.0 / tau))
    }

    /// The bounded accretive parts `A_{t,τ} = τ^{-1}[I - f(tτA)P_A]` and
    /// `B_{t,τ} = τ^{-1}[I - g(tτB)P_B]`; `S_{t,τ} = A_{t,2τ} + B_{t,2τ}`.
    pub fn accretive_parts(&self, t: C64, tau: f64) -> Result<(CMat, CMat)> {
        ensure_positive_tau(tau)?;
        let t = clip_right_half_plane(t)?;
        let d = self.dim();
        let id = CMat::identity(d, d);
        let fa = self.half_factor_scaled(&self.a, &self.f, t, tau)?;
        let fb = self.half_factor_scaled(&self.b, &self.g, t, tau)?;
        Ok((
            (&id - fa).scale(1.0 / tau),
            (&id - fb).scale(1.0 / tau),
        ))
    }

    /// `f(tτA) P_A` (no factor 2: the accretive parts carry the plain
    /// argument, the step carries `2t`).
    fn half_factor_scaled(
        &self,
        op: &DegenerateOperator,
        f: &KatoFunction,
        t: C64,
        tau: f64,
    ) -> Result<CMat> {
        let scale = t * tau;
        let values: Vec<C64> = op
            .eigenvalues()
            .iter()
            .map(|&l| f.evaluate(scale * l))
            .collect::<Result<_>>()?;
        let mut j = 0;
        Ok(op.map_embedded(|_| {
            let v = values[j];
            j += 1;
            v
        }))
    }

    /// `w = (I + S_{t,τ})^{-1} u` by LU with iterative refinement; the
    /// residual contract is `‖(I+S)w - u‖ ≤ 1e-10 ‖u‖`, reachable even for
    /// small `τ` where `I + S` is ill-conditioned.
    pub fn resolvent(&self, t: C64, tau: f64, u: &CVec) -> Result<CVec> {
        let d = self.dim();
        let m = CMat::identity(d, d) + self.regularization(t, tau)?;
        let lu = m.clone().lu();
        let mut w = lu.solve(u).ok_or(Error::SingularResolvent)?;
        let target = tol::RESOLVENT_RESIDUAL * u.norm();
        for _ in 0..4 {
            let r = u - &m * &w;
            if r.norm() <= target {
                break;
            }
            let dw = lu.solve(&r).ok_or(Error::SingularResolvent)?;
            w += dw;
        }
        let residual = (u - &m * &w).norm();
        if residual > target && u.norm() > 0.0 {
            return Err(Error::NumericalFailure(format!(
                "resolvent residual {residual:.3e} above contract {target:.3e}"
            )));
        }
        Ok(w)
    }

    /// Defect of the energy identity at real `t`:
    /// `|(u,w) - ‖w‖² - (A_{it,2τ}w, w) - (B_{it,2τ}w, w)|`
    /// with `w = (I + S_{it,τ})^{-1} u`.
    pub fn energy_residual(&self, t: f64, tau: f64, u: &CVec) -> Result<f64> {
        let it = C64::new(0.0, t);
        let w = self.resolvent(it, tau, u)?;
        let (a_part, b_part) = self.accretive_parts(it, 2.0 * tau)?;
        let lhs = inner(u, &w);
        let rhs = C64::new(w.norm_squared(), 0.0)
            + inner(&(&a_part * &w), &w)
            + inner(&(&b_part * &w), &w);
        Ok((lhs - rhs).norm())
    }

    /// Chernoff exponential `exp(n(F(it/n) - I)) u`. The exponent has
    /// numerical range in the closed left half-plane, so the result
    /// contracts `u`.
    pub fn chernoff_exp(&self, t: f64, n: u64, u: &CVec) -> Result<CVec> {
        if n == 0 {
            return Err(Error::InvalidParameter("power n must be >= 1".into()));
        }
        let d = self.dim();
        let m = self.step(C64::new(0.0, t / n as f64))?;
        let exponent = (m - CMat::identity(d, d)).scale(n as f64);
        Ok(exponent.exp() * u)
    }
}

fn ensure_positive_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tau must be positive and finite, got {tau}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degenerate::form_sum;
    use crate::kato::{builtin, Builtin};
    use crate::subspace::Subspace;
    use approx::assert_abs_diff_eq;

    fn cr(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn exp_neg() -> KatoFunction {
        builtin(Builtin::ExpNeg).unwrap()
    }

    fn scalar_scheme(a: f64, b: f64) -> ProductScheme {
        ProductScheme::new(
            DegenerateOperator::full(CMat::from_row_slice(1, 1, &[cr(a)])).unwrap(),
            DegenerateOperator::full(CMat::from_row_slice(1, 1, &[cr(b)])).unwrap(),
            exp_neg(),
            exp_neg(),
        )
        .unwrap()
    }

    /// Zero operators on orthogonal coordinate subspaces of ℂ⁴.
    fn orthogonal_scheme() -> ProductScheme {
        ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::coordinate(4, &[0])),
            DegenerateOperator::zero_on(Subspace::coordinate(4, &[1])),
            exp_neg(),
            exp_neg(),
        )
        .unwrap()
    }

    #[test]
    fn step_is_identity_for_zero_operators_on_full_space() {
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::full(3)),
            DegenerateOperator::zero_on(Subspace::full(3)),
            exp_neg(),
            exp_neg(),
        )
        .unwrap();
        for t in [cr(0.0), cr(1.0), C64::new(0.3, 2.0), C64::new(0.0, -5.0)] {
            let f = scheme.step(t).unwrap();
            assert!((f - CMat::identity(3, 3)).norm() < 1e-14);
        }
    }

    #[test]
    fn step_for_orthogonal_zero_operators_is_mean_of_projectors() {
        let scheme = orthogonal_scheme();
        let expected =
            (scheme.a().projector() + scheme.b().projector()).scale(0.5);
        for t in [cr(0.0), C64::new(0.0, 1.7), cr(2.0)] {
            let f = scheme.step(t).unwrap();
            assert!((f - &expected).norm() < 1e-14);
        }
    }

    #[test]
    fn scalar_step_is_exact_exponential() {
        let alpha = 0.9;
        let scheme = scalar_scheme(alpha, alpha);
        let theta = 1.3;
        let f = scheme.step(C64::new(0.0, theta)).unwrap();
        let expected = (C64::new(0.0, -2.0 * theta * alpha)).exp();
        assert!((f[(0, 0)] - expected).norm() < 1e-15);
    }

    #[test]
    fn scalar_power_is_exact_for_every_n() {
        let alpha = 0.7;
        let scheme = scalar_scheme(alpha, alpha);
        let u = CVec::from_vec(vec![C64::new(0.6, -0.3)]);
        let t = 1.9;
        let expected = (C64::new(0.0, -2.0 * t * alpha)).exp() * u[0];
        for n in [1u64, 2, 3, 17, 999, 1001, 4096] {
            let w = scheme.apply_power(t, n, &u).unwrap();
            assert!((w[0] - expected).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn power_kills_vectors_outside_both_subspaces() {
        let scheme = orthogonal_scheme();
        // e3 ⊥ M_A and ⊥ M_B
        let mut u = CVec::zeros(4);
        u[3] = cr(1.0);
        for n in [1u64, 2, 50] {
            let w = scheme.apply_power(0.8, n, &u).unwrap();
            assert!(w.norm() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn power_halves_on_single_subspace() {
        let scheme = orthogonal_scheme();
        let mut u = CVec::zeros(4);
        u[0] = cr(1.0); // u ∈ M_A, P_B u = 0
        for n in [1u64, 3, 10] {
            let w = scheme.apply_power(1.1, n, &u).unwrap();
            let expected = 0.5f64.powi(n as i32);
            assert_abs_diff_eq!(w.norm(), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn apply_power_paths_agree() {
        // same n through the matrix-power path and the repeated-product path
        let scheme = scalar_pair_8();
        let u = unit_vector(8, 3);
        let t = 0.9;
        let n = 600;
        let via_products = scheme.apply_power(t, n, &u).unwrap();
        let via_power = scheme.step_power(t, n).unwrap() * &u;
        assert!((via_products - via_power).norm() < 1e-9);
    }

    fn unit_vector(d: usize, seed: usize) -> CVec {
        let mut v = CVec::from_fn(d, |i, _| {
            C64::new(
                ((i * 13 + seed * 7 + 1) as f64).sin(),
                ((i * 29 + seed * 3 + 2) as f64).cos(),
            )
        });
        let n = v.norm();
        v /= cr(n);
        v
    }

    /// Deterministic full-subspace 8×8 Hermitian pair.
    fn scalar_pair_8() -> ProductScheme {
        let h = |k: usize| {
            let m = CMat::from_fn(8, 8, |i, j| {
                C64::new(
                    ((i * j + k + 1) as f64).sin(),
                    ((i as f64) - (j as f64)) * 0.21,
                )
            });
            let herm = (&m + m.adjoint()).scale(0.5);
            // shift to PSD
            let eig = crate::linalg::hermitian_eig(&herm).unwrap();
            let min = eig.eigenvalues().min();
            let shifted = herm + CMat::identity(8, 8).scale(0.1 + min.abs());
            DegenerateOperator::full(shifted).unwrap()
        };
        ProductScheme::new(h(0), h(5), exp_neg(), exp_neg()).unwrap()
    }

    #[test]
    fn regularization_vanishes_when_step_is_identity() {
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::full(2)),
            DegenerateOperator::zero_on(Subspace::full(2)),
            exp_neg(),
            exp_neg(),
        )
        .unwrap();
        let s = scheme.regularization(cr(1.0), 0.3).unwrap();
        assert!(s.norm() < 1e-13);
    }

    #[test]
    fn regularization_at_time_zero_with_proper_subspaces() {
        // S(0,τ) = τ^{-1}(I - (P_A + P_B)/2): legal and nonzero, the
        // degenerate part of the theorem depends on it
        let scheme = orthogonal_scheme();
        let tau = 0.25;
        let s = scheme.regularization(cr(0.0), tau).unwrap();
        let mean = (scheme.a().projector() + scheme.b().projector()).scale(0.5);
        let expected = (CMat::identity(4, 4) - mean).scale(1.0 / tau);
        assert!((s - expected).norm() < 1e-13);
    }

    #[test]
    fn scalar_regularization_oracle() {
        // a=1, b=2, f=g=exp, t=1, τ=0.1:
        // S = 10 (1 - (e^{-0.2} + e^{-0.4})/2)
        let scheme = scalar_scheme_ab(1.0, 2.0);
        let s = scheme.regularization(cr(1.0), 0.1).unwrap();
        let expected = 10.0 * (1.0 - ((-0.2f64).exp() + (-0.4f64).exp()) / 2.0);
        assert_abs_diff_eq!(s[(0, 0)].re, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(s[(0, 0)].im, 0.0, epsilon = 1e-13);
    }

    fn scalar_scheme_ab(a: f64, b: f64) -> ProductScheme {
        ProductScheme::new(
            DegenerateOperator::full(CMat::from_row_slice(1, 1, &[cr(a)])).unwrap(),
            DegenerateOperator::full(CMat::from_row_slice(1, 1, &[cr(b)])).unwrap(),
            exp_neg(),
            exp_neg(),
        )
        .unwrap()
    }

    #[test]
    fn regularization_tends_to_scaled_embedded_sum() {
        // τ → 0 at fixed Re t > 0: S_{t,τ} u → t (A_emb + B_emb) u on H'
        let scheme = scalar_pair_8();
        let t = cr(0.7);
        let u = unit_vector(8, 1);
        let target = (scheme.a().embedded() + scheme.b().embedded()) * &u * t;
        // first-order limit: error ~ τ t² ‖(A²+B²)u‖, so halving τ should
        // roughly halve the defect
        let mut prev = f64::INFINITY;
        for k in [4, 5, 6, 7, 8, 9, 10, 11, 12] {
            let tau = 2.0f64.powi(-k);
            let s = scheme.regularization(t, tau).unwrap();
            let err = (&s * &u - &target).norm();
            assert!(err < prev * 0.7, "not improving at tau = {tau}");
            prev = err;
        }
        assert!(prev < 2e-2);
    }

    #[test]
    fn accretive_parts_at_zero_time() {
        let scheme = orthogonal_scheme();
        let tau = 0.4;
        let (a_part, _) = scheme.accretive_parts(cr(0.0), tau).unwrap();
        let expected = (CMat::identity(4, 4) - scheme.a().projector()).scale(1.0 / tau);
        assert!((a_part - expected).norm() < 1e-13);
    }

    #[test]
    fn decomposition_identity() {
        // S(t,τ) = A_part(t,2τ) + B_part(t,2τ) entrywise
        let scheme = scalar_pair_8();
        for (t, tau) in [
            (C64::new(0.0, 1.3), 0.05),
            (cr(0.8), 0.3),
            (C64::new(0.2, -0.9), 0.01),
        ] {
            let s = scheme.regularization(t, tau).unwrap();
            let (a_part, b_part) = scheme.accretive_parts(t, 2.0 * tau).unwrap();
            let defect = (&s - (a_part + b_part)).norm();
            assert!(
                defect < 1e-12 / tau,
                "defect {defect:.3e} at t = {t}, tau = {tau}"
            );
        }
    }

    #[test]
    fn accretivity_of_parts() {
        let scheme = scalar_pair_8();
        let tau = 0.07;
        for k in 0..20 {
            let t = C64::new(0.0, -10.0 + k as f64);
            let (a_part, b_part) = scheme.accretive_parts(t, tau).unwrap();
            for s in 0..10 {
                let u = unit_vector(8, 40 + s);
                for part in [&a_part, &b_part] {
                    let q = inner(&(part * &u), &u);
                    assert!(q.re >= -1e-10 / tau, "numerical range left of axis: {q}");
                }
            }
        }
    }

    #[test]
    fn resolvent_identity_case() {
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::full(2)),
            DegenerateOperator::zero_on(Subspace::full(2)),
            exp_neg(),
            exp_neg(),
        )
        .unwrap();
        let u = CVec::from_vec(vec![cr(1.0), C64::new(0.0, -2.0)]);
        let w = scheme.resolvent(cr(1.0), 0.1, &u).unwrap();
        assert!((w - &u).norm() < 1e-13);
    }

    #[test]
    fn scalar_resolvent_oracle() {
        let scheme = scalar_scheme_ab(1.0, 2.0);
        let u = CVec::from_vec(vec![C64::new(0.3, 0.4)]);
        let w = scheme.resolvent(cr(1.0), 0.1, &u).unwrap();
        let s = 10.0 * (1.0 - ((-0.2f64).exp() + (-0.4f64).exp()) / 2.0);
        let expected = u[0] / (1.0 + s);
        assert!((w[0] - expected).norm() < 1e-14);
    }

    #[test]
    fn resolvent_contracts_on_imaginary_axis() {
        let scheme = scalar_pair_8();
        for k in 0..30 {
            let t = C64::new(0.0, -7.0 + k as f64 * 0.5);
            let tau = [1.0, 0.1, 0.01][k % 3];
            let u = unit_vector(8, k);
            let w = scheme.resolvent(t, tau, &u).unwrap();
            assert!(w.norm() <= u.norm() * (1.0 + 1e-10));
        }
    }

    #[test]
    fn energy_residual_zero_case() {
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::full(2)),
            DegenerateOperator::zero_on(Subspace::full(2)),
            exp_neg(),
            exp_neg(),
        )
        .unwrap();
        let u = CVec::from_vec(vec![cr(0.4), cr(-0.9)]);
        let r = scheme.energy_residual(1.0, 0.2, &u).unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn scalar_energy_residual() {
        let scheme = scalar_scheme_ab(1.0, 2.0);
        let u = CVec::from_vec(vec![C64::new(0.8, -0.1)]);
        let r = scheme.energy_residual(1.0, 0.1, &u).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn random_energy_residual_contract() {
        let scheme = scalar_pair_8();
        let u = unit_vector(8, 11);
        let (t, tau) = (0.7, 0.05);
        let r = scheme.energy_residual(t, tau, &u).unwrap();
        assert!(r < 1e-9 * u.norm_squared() * (1.0 / tau).max(1.0));
    }

    #[test]
    fn chernoff_exponential_identity_case() {
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::full(2)),
            DegenerateOperator::zero_on(Subspace::full(2)),
            exp_neg(),
            exp_neg(),
        )
        .unwrap();
        let u = CVec::from_vec(vec![cr(1.0), cr(2.0)]);
        let w = scheme.chernoff_exp(1.3, 7, &u).unwrap();
        assert!((w - &u).norm() < 1e-12);
    }

    #[test]
    fn scalar_chernoff_limit() {
        // exp(n(e^{-2itα/n} - 1)) → e^{-2itα}
        let alpha = 0.6;
        let scheme = scalar_scheme(alpha, alpha);
        let u = CVec::from_vec(vec![cr(1.0)]);
        let t = 1.0;
        let n = 10_000u64;
        let w = scheme.chernoff_exp(t, n, &u).unwrap();
        let phase = C64::new(0.0, -2.0 * t * alpha / n as f64).exp() - cr(1.0);
        let expected = (phase * n as f64).exp();
        assert!((w[0] - expected).norm() < 1e-12);
        let limit = C64::new(0.0, -2.0 * t * alpha).exp();
        assert!((w[0] - limit).norm() < 1e-3);
    }

    #[test]
    fn chernoff_contracts() {
        let scheme = scalar_pair_8();
        for n in [1u64, 16, 256, 4096] {
            let u = unit_vector(8, n as usize);
            let w = scheme.chernoff_exp(1.7, n, &u).unwrap();
            assert!(w.norm() <= u.norm() * (1.0 + 1e-8));
        }
    }

    #[test]
    fn power_matches_form_sum_limit_in_scalar_case() {
        let alpha = 0.45;
        let scheme = scalar_scheme(alpha, alpha);
        let fs = form_sum(scheme.a(), scheme.b()).unwrap();
        let u = CVec::from_vec(vec![cr(1.0)]);
        for t in [0.5, 1.0, 2.0] {
            let w = scheme.apply_power(t, 64, &u).unwrap();
            let target = fs.apply_group(t, &u);
            assert!((w - target).norm() < 1e-13);
        }
    }
}
