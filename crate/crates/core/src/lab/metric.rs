//! The weighted resolvent metric
//! `∫ ‖(I+S_{it,τ})^{-1}u - (I+itC)^{-1}P'u‖² dμ`, `dμ = (1+t²)^{-1} dt`,
//! truncated to `[-T, T]` with the tail bound reported alongside.
//!
//! This is the quantity that drives the boundary convergence: it tends to 0
//! as τ → 0, even though the integrand may spike at isolated resonant times
//! (the finite-dimensional shadow of the exceptional set).

use crate::degenerate::FormSum;
use crate::error::Result;
use crate::exec::run_indexed;
use crate::lab::quadrature::WeightedMeasure;
use crate::linalg::{CVec, C64};
use crate::scheme::ProductScheme;

/// One τ sample of the metric, with the truncation made explicit.
#[derive(Debug, Clone, Copy)]
pub struct ResolventMetricPoint {
    pub tau: f64,
    pub metric: f64,
    pub truncation: f64,
    pub tail_bound: f64,
}

pub fn resolvent_metric(
    scheme: &ProductScheme,
    fs: &FormSum,
    tau: f64,
    u: &CVec,
    wm: &WeightedMeasure,
) -> Result<f64> {
    metric_impl(scheme, fs, tau, u, wm, false)
}

pub fn resolvent_metric_seq(
    scheme: &ProductScheme,
    fs: &FormSum,
    tau: f64,
    u: &CVec,
    wm: &WeightedMeasure,
) -> Result<f64> {
    metric_impl(scheme, fs, tau, u, wm, true)
}

fn metric_impl(
    scheme: &ProductScheme,
    fs: &FormSum,
    tau: f64,
    u: &CVec,
    wm: &WeightedMeasure,
    sequential: bool,
) -> Result<f64> {
    let q = wm.quadrature();
    let nodes = q.nodes();
    let weights = q.weights();
    let values: Vec<Result<f64>> = run_indexed(nodes.len(), sequential, |i| {
        let t = nodes[i];
        let it = C64::new(0.0, t);
        let w_tau = scheme.resolvent(it, tau, u)?;
        let w_limit = fs.apply_resolvent(it, u)?;
        Ok((w_tau - w_limit).norm_squared() * wm.density(t))
    });
    let mut acc = 0.0;
    for (v, w) in values.into_iter().zip(weights) {
        acc += w * v?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degenerate::{form_sum, DegenerateOperator};
    use crate::kato::{builtin, Builtin};
    use crate::linalg::CMat;
    use crate::subspace::Subspace;

    fn cr(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn zero_scheme_with_zero_generator_gives_zero_metric() {
        let f = builtin(Builtin::ExpNeg).unwrap();
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::full(2)),
            DegenerateOperator::zero_on(Subspace::full(2)),
            f.clone(),
            f,
        )
        .unwrap();
        let fs = form_sum(scheme.a(), scheme.b()).unwrap();
        let u = CVec::from_vec(vec![cr(0.4), C64::new(0.0, -0.8)]);
        let wm = WeightedMeasure::new(10.0, 801).unwrap();
        let m = resolvent_metric(&scheme, &fs, 0.25, &u, &wm).unwrap();
        assert!(m < 1e-18);
    }

    #[test]
    fn scalar_metric_decreases_with_tau() {
        let f = builtin(Builtin::ExpNeg).unwrap();
        let scheme = ProductScheme::new(
            DegenerateOperator::full(CMat::from_row_slice(1, 1, &[cr(1.0)])).unwrap(),
            DegenerateOperator::full(CMat::from_row_slice(1, 1, &[cr(2.0)])).unwrap(),
            f.clone(),
            f,
        )
        .unwrap();
        let fs = form_sum(scheme.a(), scheme.b()).unwrap();
        let u = CVec::from_vec(vec![cr(1.0)]);
        let wm = WeightedMeasure::default_lab();
        let coarse = resolvent_metric(&scheme, &fs, 0.1, &u, &wm).unwrap();
        let fine = resolvent_metric(&scheme, &fs, 0.01, &u, &wm).unwrap();
        assert!(fine < coarse, "fine {fine:.3e} vs coarse {coarse:.3e}");
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = builtin(Builtin::ExpNeg).unwrap();
        let scheme = ProductScheme::new(
            DegenerateOperator::zero_on(Subspace::coordinate(3, &[0, 1])),
            DegenerateOperator::zero_on(Subspace::coordinate(3, &[1, 2])),
            f.clone(),
            f,
        )
        .unwrap();
        let fs = form_sum(scheme.a(), scheme.b()).unwrap();
        let u = CVec::from_vec(vec![cr(0.5), cr(0.5), C64::new(0.0, 0.5)]);
        let wm = WeightedMeasure::new(20.0, 1601).unwrap();
        let a = resolvent_metric(&scheme, &fs, 0.125, &u, &wm).unwrap();
        let b = resolvent_metric_seq(&scheme, &fs, 0.125, &u, &wm).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
