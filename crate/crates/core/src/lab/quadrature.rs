//! Quadrature rules, the weighted measure `dμ = (1+t²)^{-1} dt`, and the
//! integrable profiles used by the weak-convergence experiments.

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    CompositeSimpson,
    Trapezoid,
}

/// Uniform-grid quadrature on `[lo, hi]` with an odd number of points.
#[derive(Debug, Clone)]
pub struct Quadrature {
    rule: QuadRule,
    lo: f64,
    hi: f64,
    points: usize,
}

impl Quadrature {
    pub fn new(rule: QuadRule, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "invalid interval [{lo}, {hi}]"
            )));
        }
        if points < 3 || points % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "points must be odd and >= 3, got {points}"
            )));
        }
        Ok(Self {
            rule,
            lo,
            hi,
            points,
        })
    }

    /// Composite Simpson with enough points that `∫ 1/(1+t²)` over the
    /// interval is exact to well below 1e-8.
    pub fn default_simpson(lo: f64, hi: f64) -> Self {
        let span = hi - lo;
        let points = (span * 160.0).ceil() as usize | 1;
        Self::new(QuadRule::CompositeSimpson, lo, hi, points.max(161))
            .expect("default parameters are valid")
    }

    pub fn rule(&self) -> QuadRule {
        self.rule
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| self.lo + h * i as f64).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        let n = self.points;
        match self.rule {
            QuadRule::Trapezoid => (0..n)
                .map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h })
                .collect(),
            QuadRule::CompositeSimpson => (0..n)
                .map(|i| {
                    if i == 0 || i == n - 1 {
                        h / 3.0
                    } else if i % 2 == 1 {
                        4.0 * h / 3.0
                    } else {
                        2.0 * h / 3.0
                    }
                })
                .collect(),
        }
    }

    pub fn integrate_scalar(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes()
            .iter()
            .zip(self.weights())
            .map(|(&t, w)| w * f(t))
            .sum()
    }

    /// Weighted sum of vector samples taken at the nodes (in node order, so
    /// the result does not depend on how the samples were computed).
    pub fn combine(&self, samples: &[CVec]) -> CVec {
        assert_eq!(samples.len(), self.points);
        let dim = samples[0].len();
        let mut acc = CVec::zeros(dim);
        for (w, s) in self.weights().iter().zip(samples) {
            acc += s * C64::new(*w, 0.0);
        }
        acc
    }
}

/// The finite measure `dμ = (1+t²)^{-1} dt` truncated to `[-T, T]`.
///
/// Total mass on the window is `2·arctan(T) ∈ (π - 2/T, π)`; the neglected
/// tail is below `2/T` and is reported next to every metric rather than
/// hidden.
#[derive(Debug, Clone)]
pub struct WeightedMeasure {
    truncation: f64,
    quadrature: Quadrature,
}

impl WeightedMeasure {
    pub fn new(truncation: f64, points: usize) -> Result<Self> {
        if !(truncation.is_finite() && truncation > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation must be positive, got {truncation}"
            )));
        }
        Ok(Self {
            truncation,
            quadrature: Quadrature::new(
                QuadRule::CompositeSimpson,
                -truncation,
                truncation,
                points,
            )?,
        })
    }

    /// `T = 50` with a grid fine enough for resolvent integrands at
    /// moderate spectral bounds.
    pub fn default_lab() -> Self {
        Self::new(50.0, 16001).expect("default parameters are valid")
    }

    pub fn density(&self, t: f64) -> f64 {
        1.0 / (1.0 + t * t)
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    /// Quadrature mass of the window (exact value `2 arctan T`).
    pub fn mass(&self) -> f64 {
        self.quadrature.integrate_scalar(|t| self.density(t))
    }

    /// Bound on the mass outside the window: `∫_{|t|>T} dμ < 2/T`.
    pub fn tail_bound(&self) -> f64 {
        2.0 / self.truncation
    }
}

/// Integrable profiles for the weak-convergence integrals, normalized to
/// unit L¹ mass on the line so gaps are comparable across profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiProfile {
    /// `exp(-t²/2σ²) / (σ√(2π))`
    Gaussian(f64),
    /// `1/(2T)` on `[-T, T]`
    Box(f64),
    /// `(1/π)/(1+t²)`
    Cauchy,
}

impl PhiProfile {
    pub fn density(&self, t: f64) -> f64 {
        match *self {
            PhiProfile::Gaussian(sigma) => {
                let x = t / sigma;
                (-0.5 * x * x).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            PhiProfile::Box(half) => {
                if t.abs() <= half {
                    0.5 / half
                } else {
                    0.0
                }
            }
            PhiProfile::Cauchy => 1.0 / (std::f64::consts::PI * (1.0 + t * t)),
        }
    }

    /// Length scale that the quadrature must resolve (σ for Gaussian,
    /// 1 otherwise).
    pub fn unit_scale(&self) -> f64 {
        match *self {
            PhiProfile::Gaussian(sigma) => sigma,
            _ => 1.0,
        }
    }

    /// Quadrature covering the profile's effective support with at least
    /// 20 points per unit scale.
    pub fn default_quadrature(&self) -> Quadrature {
        let (lo, hi) = match *self {
            PhiProfile::Gaussian(sigma) => (-8.0 * sigma, 8.0 * sigma),
            PhiProfile::Box(half) => (-half, half),
            PhiProfile::Cauchy => (-40.0, 40.0),
        };
        let needed = self.min_points(lo, hi);
        let points = (needed.max(321)) | 1;
        Quadrature::new(QuadRule::CompositeSimpson, lo, hi, points)
            .expect("default parameters are valid")
    }

    /// Minimum admissible point count on `[lo, hi]`: 20 per unit scale.
    pub fn min_points(&self, lo: f64, hi: f64) -> usize {
        ((hi - lo) / self.unit_scale() * 20.0).ceil() as usize
    }

    pub fn name(&self) -> String {
        match *self {
            PhiProfile::Gaussian(s) => format!("gaussian({s})"),
            PhiProfile::Box(t) => format!("box({t})"),
            PhiProfile::Cauchy => "cauchy".into(),
        }
    }
}
