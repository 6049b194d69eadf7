//! Admissible scalar functions for the product formula and their numerical
//! validation.
//!
//! An admissible function is bounded and holomorphic on the open right
//! half-plane with
//!
//! ```text
//! |f(z)| ≤ 1,   f(0) = 1,   f'(+0) = -1,   0 ≤ f(s) ≤ 1 for s > 0,
//! ```
//!
//! where `f'(+0)` is the non-tangential limit of `(f(z) - 1)/z` as `z → 0`
//! inside the half-plane. The prototype is `exp(-z)`; resolvent-type
//! functions `(1 + z/k)^{-k}` are admissible for every integer `k ≥ 1`.
//!
//! Holomorphy itself is not checked (there is no practical numerical test);
//! the builtins are holomorphic by construction and user-supplied functions
//! are accepted under that caveat. Evaluation on the imaginary axis uses
//! the direct formula value — the builtins all extend continuously to the
//! closed half-plane.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::clip_right_half_plane;
use crate::tol;

/// Richardson radii for the boundary-derivative estimate, coarsest first.
const DERIV_RADII: [f64; 3] = [1e-3, 1e-4, 1e-5];

#[derive(Clone)]
pub struct KatoFunction {
    name: String,
    eval: Arc<dyn Fn(C64) -> C64 + Send + Sync>,
}

impl fmt::Debug for KatoFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KatoFunction")
            .field("name", &self.name)
            .finish()
    }
}

impl KatoFunction {
    /// Wraps a user-supplied function. The admissibility conditions can be
    /// checked with [`validate`]; holomorphy is taken on trust.
    pub fn new(name: impl Into<String>, eval: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluates at `z`, clipping `Re z ∈ [-1e-12, 0)` onto the boundary.
    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let z = clip_right_half_plane(z)?;
        Ok((self.eval)(z))
    }
}

/// Built-in admissible functions. CLI names: `exp`, `res`, `res^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `z ↦ exp(-z)`
    ExpNeg,
    /// `z ↦ (1 + z)^{-1}`
    Resolvent,
    /// `z ↦ (1 + z/k)^{-k}`, `k ≥ 1`
    IteratedResolvent(u32),
}

pub fn builtin(which: Builtin) -> Result<KatoFunction> {
    match which {
        Builtin::ExpNeg => Ok(KatoFunction::new("exp", |z: C64| (-z).exp())),
        Builtin::Resolvent => Ok(KatoFunction::new("res", |z: C64| {
            (C64::new(1.0, 0.0) + z).inv()
        })),
        Builtin::IteratedResolvent(k) => {
            if k == 0 {
                return Err(Error::UnknownName("res^0".into()));
            }
            let kf = k as f64;
            let name = if k == 1 {
                "res^1".to_string()
            } else {
                format!("res^{k}")
            };
            Ok(KatoFunction::new(name, move |z: C64| {
                (C64::new(1.0, 0.0) + z / kf).powi(-(k as i32))
            }))
        }
    }
}

/// Parses the CLI spelling of a builtin: `exp`, `res`, or `res^k`.
pub fn parse_kato_name(name: &str) -> Result<KatoFunction> {
    match name {
        "exp" => builtin(Builtin::ExpNeg),
        "res" => builtin(Builtin::Resolvent),
        _ => {
            if let Some(k) = name.strip_prefix("res^") {
                let k: u32 = k
                    .parse()
                    .map_err(|_| Error::UnknownName(name.to_string()))?;
                builtin(Builtin::IteratedResolvent(k))
            } else {
                Err(Error::UnknownName(name.to_string()))
            }
        }
    }
}

/// Sampling grid for [`validate`]: points `r e^{iθ}` with moduli spanning
/// `[1e-6, 1e2]` and sector angles inside `(-π/2, π/2)` bounded 0.05 away
/// from the boundary.
#[derive(Debug, Clone)]
pub struct HalfPlaneGrid {
    moduli: Vec<f64>,
    angles: Vec<f64>,
}

impl HalfPlaneGrid {
    pub const R_LO: f64 = 1e-6;
    pub const R_HI: f64 = 1e2;
    pub const THETA_MARGIN: f64 = 0.05;

    pub fn with_resolution(n_moduli: usize, n_angles: usize) -> Self {
        let n_moduli = n_moduli.max(2);
        let n_angles = n_angles.max(2);
        let (lo, hi) = (Self::R_LO.log10(), Self::R_HI.log10());
        let moduli = (0..n_moduli)
            .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n_moduli - 1) as f64))
            .collect();
        let t_hi = std::f64::consts::FRAC_PI_2 - Self::THETA_MARGIN;
        let angles = (0..n_angles)
            .map(|j| -t_hi + 2.0 * t_hi * j as f64 / (n_angles - 1) as f64)
            .collect();
        Self { moduli, angles }
    }

    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

impl Default for HalfPlaneGrid {
    fn default() -> Self {
        Self::with_resolution(49, 25)
    }
}

/// Condition checked by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    /// `|f(z)| ≤ 1` on the sampled half-plane grid.
    Modulus,
    /// `f(0) = 1` exactly.
    ValueAtZero,
    /// `f'(+0) = -1` along every sampled sector ray.
    DerivativeAtZero,
    /// `0 ≤ Re f(s) ≤ 1` for sampled `s > 0`.
    RealAxisRange,
    /// `Im f(s) = 0` for sampled `s > 0`.
    RealAxisImaginary,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::Modulus => "modulus",
            ConditionId::ValueAtZero => "value_at_zero",
            ConditionId::DerivativeAtZero => "derivative_at_zero",
            ConditionId::RealAxisRange => "real_axis_range",
            ConditionId::RealAxisImaginary => "real_axis_imaginary",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Violation {
    pub condition: ConditionId,
    /// Sample point at which the worst violation occurred.
    pub sample: C64,
    /// Excess over the condition's tolerance.
    pub value: f64,
}

/// Outcome of the admissibility checks; failures are reported, not thrown.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub passed: bool,
    pub max_modulus: f64,
    /// Richardson estimate of `f'(+0)`; the worst ray when several differ.
    pub boundary_deriv_estimate: C64,
    pub worst_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn as_json(&self) -> serde_json::Value {
        json!({
            "passed": self.passed,
            "max_modulus": self.max_modulus,
            "boundary_deriv_estimate": [
                self.boundary_deriv_estimate.re,
                self.boundary_deriv_estimate.im,
            ],
            "worst_violation": self.worst_violation.map(|v| json!({
                "condition": v.condition.to_string(),
                "sample": [v.sample.re, v.sample.im],
                "value": v.value,
            })),
        })
    }
}

struct ViolationTracker {
    worst: Option<Violation>,
}

impl ViolationTracker {
    fn new() -> Self {
        Self { worst: None }
    }

    fn record(&mut self, condition: ConditionId, sample: C64, excess: f64) {
        if excess <= 0.0 {
            return;
        }
        if self.worst.map_or(true, |w| excess > w.value) {
            self.worst = Some(Violation {
                condition,
                sample,
                value: excess,
            });
        }
    }
}

/// Checks the admissibility conditions on the given grid.
///
/// * modulus: `|f(z)| ≤ 1 + 1e-10` at every grid point;
/// * `f(0) = 1` exactly;
/// * real axis: `Re f(s) ∈ [0, 1]` and `|Im f(s)| ≤ 1e-12` at the sampled
///   positive moduli;
/// * boundary derivative: along each sector ray, `(f(re^{iθ}) - 1)/(re^{iθ})`
///   is Richardson-extrapolated over `r ∈ {1e-3, 1e-4, 1e-5}` and must land
///   within `1e-4` of `-1`. Sector rays discretize the paper-style
///   non-tangential limit.
pub fn validate(f: &KatoFunction, grid: &HalfPlaneGrid) -> ValidationReport {
    let mut tracker = ViolationTracker::new();
    let mut max_modulus: f64 = 0.0;

    // f(0) = 1, exactly.
    let at_zero = (f.eval)(C64::new(0.0, 0.0));
    tracker.record(
        ConditionId::ValueAtZero,
        C64::new(0.0, 0.0),
        (at_zero - C64::new(1.0, 0.0)).norm(),
    );

    // modulus over the sector grid
    for &r in grid.moduli() {
        for &theta in grid.angles() {
            let z = C64::from_polar(r, theta);
            let v = (f.eval)(z);
            let m = v.norm();
            max_modulus = max_modulus.max(m);
            tracker.record(ConditionId::Modulus, z, m - (1.0 + tol::KATO_MODULUS));
        }
    }

    // real-axis conditions at the sampled positive moduli
    for &s in grid.moduli() {
        let z = C64::new(s, 0.0);
        let v = (f.eval)(z);
        let range_excess = (-v.re).max(v.re - 1.0) - tol::KATO_REAL_AXIS;
        tracker.record(ConditionId::RealAxisRange, z, range_excess);
        tracker.record(
            ConditionId::RealAxisImaginary,
            z,
            v.im.abs() - tol::KATO_REAL_AXIS,
        );
    }

    // boundary derivative along every ray
    let mut worst_deriv = C64::new(-1.0, 0.0);
    let mut worst_dev = -1.0;
    for &theta in grid.angles() {
        let est = richardson_derivative(f, theta);
        let dev = (est + C64::new(1.0, 0.0)).norm();
        if dev > worst_dev {
            worst_dev = dev;
            worst_deriv = est;
        }
        tracker.record(
            ConditionId::DerivativeAtZero,
            C64::from_polar(DERIV_RADII[2], theta),
            dev - tol::KATO_DERIV,
        );
    }

    ValidationReport {
        passed: tracker.worst.is_none(),
        max_modulus,
        boundary_deriv_estimate: worst_deriv,
        worst_violation: tracker.worst,
    }
}

/// Two-level Richardson extrapolation of `(f(z) - 1)/z` along the ray `θ`
/// with radius ratio 10, eliminating the `O(r)` and `O(r²)` terms.
fn richardson_derivative(f: &KatoFunction, theta: f64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let g: Vec<C64> = DERIV_RADII
        .iter()
        .map(|&r| {
            let z = C64::from_polar(r, theta);
            ((f.eval)(z) - one) / z
        })
        .collect();
    let l01 = (g[1] * 10.0 - g[0]) / 9.0;
    let l12 = (g[2] * 10.0 - g[1]) / 9.0;
    (l12 * 100.0 - l01) / 99.0
}
