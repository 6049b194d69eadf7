//! Equicontinuity probe for the boundary resolvents.
//!
//! Full-sequence convergence (no subsequence, no exceptional set) holds
//! whenever `t ↦ (I+S_{it,τ})^{-1}u` is equicontinuous in τ at some
//! `t₀ ≠ 0`. The probe measures the empirical modulus of continuity
//! `sup_τ ‖w_{t₀+δ,τ} - w_{t₀,τ}‖` on a τ grid; it reports, and leaves the
//! interpretation to the caller — the step for general admissible
//! functions need not be continuous in t.

use crate::error::{Error, Result};
use crate::exec::run_indexed;
use crate::linalg::{CVec, C64};
use crate::scheme::ProductScheme;

#[derive(Debug, Clone, Copy)]
pub struct EquicontinuityRow {
    pub delta: f64,
    /// `sup_τ ‖w_{t0+δ,τ} - w_{t0,τ}‖`
    pub modulus: f64,
    /// τ attaining the supremum.
    pub worst_tau: f64,
}

pub fn equicontinuity_probe(
    scheme: &ProductScheme,
    t0: f64,
    tau_grid: &[f64],
    delta_grid: &[f64],
    u: &CVec,
) -> Result<Vec<EquicontinuityRow>> {
    if t0 == 0.0 {
        return Err(Error::InvalidParameter("t0 must be nonzero".into()));
    }
    if tau_grid.is_empty() || delta_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "tau and delta grids must be nonempty".into(),
        ));
    }
    let base: Vec<Result<CVec>> = run_indexed(tau_grid.len(), false, |k| {
        scheme.resolvent(C64::new(0.0, t0), tau_grid[k], u)
    });
    let base: Vec<CVec> = base.into_iter().collect::<Result<_>>()?;

    let cells: Vec<Result<f64>> =
        run_indexed(delta_grid.len() * tau_grid.len(), false, |idx| {
            let di = idx / tau_grid.len();
            let ki = idx % tau_grid.len();
            let shifted =
                scheme.resolvent(C64::new(0.0, t0 + delta_grid[di]), tau_grid[ki], u)?;
            Ok((shifted - &base[ki]).norm())
        });
    let cells: Vec<f64> = cells.into_iter().collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(delta_grid.len());
    for (di, &delta) in delta_grid.iter().enumerate() {
        let mut modulus = -1.0;
        let mut worst_tau = tau_grid[0];
        for (ki, &tau) in tau_grid.iter().enumerate() {
            let v = cells[di * tau_grid.len() + ki];
            if v > modulus {
                modulus = v;
                worst_tau = tau;
            }
        }
        rows.push(EquicontinuityRow {
            delta,
            modulus,
            worst_tau,
        });
    }
    Ok(rows)
}
