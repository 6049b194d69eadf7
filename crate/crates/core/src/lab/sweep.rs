//! Strong-convergence sweeps: per-(t, n, vector) errors
//! `‖F(it/n)^n u - exp(-itC) P'u‖`, observed convergence orders, and
//! convergence flags.
//!
//! The limit theorem only guarantees a subsequence and an exceptional
//! t-set of measure zero; the sweep therefore evaluates the full sequence
//! on a fixed grid and flags any series that stalls instead of searching
//! for subsequences.

use crate::degenerate::FormSum;
use crate::error::Result;
use crate::exec::run_indexed;
use crate::lab::{projected_norm, VectorClass, VectorClassifier};
use crate::linalg::CVec;
use crate::scheme::ProductScheme;
use crate::tol;

/// One `(t, n, vector)` cell of a sweep.
#[derive(Debug, Clone)]
pub struct ConvergenceCell {
    pub t: f64,
    pub n: u64,
    pub vector_index: usize,
    pub class: VectorClass,
    pub error: f64,
}

/// Per-(t, vector) series summary.
#[derive(Debug, Clone)]
pub struct SeriesSummary {
    pub t: f64,
    pub vector_index: usize,
    pub class: VectorClass,
    /// Median of `log₂(e_n / e_{2n})` over the top half of the n grid;
    /// `None` when the series hits the floating-point floor.
    pub observed_order: Option<f64>,
    /// Final error below `1e-3`, or strictly decreasing over the last four
    /// grid points.
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub descriptor: String,
    pub t_grid: Vec<f64>,
    pub n_grid: Vec<u64>,
    /// Cells in `(t, n, vector)` lexicographic order.
    pub cells: Vec<ConvergenceCell>,
    /// Summaries in `(t, vector)` order.
    pub series: Vec<SeriesSummary>,
}

/// `‖F(it/n)^n u - exp(-itC) P'u‖`.
pub fn strong_error(
    scheme: &ProductScheme,
    fs: &FormSum,
    t: f64,
    n: u64,
    u: &CVec,
) -> Result<f64> {
    let approx = scheme.apply_power(t, n, u)?;
    let target = fs.apply_group(t, u);
    Ok((approx - target).norm())
}

pub fn convergence_sweep(
    scheme: &ProductScheme,
    fs: &FormSum,
    t_grid: &[f64],
    n_grid: &[u64],
    vectors: &[CVec],
) -> Result<ConvergenceReport> {
    sweep_impl(scheme, fs, t_grid, n_grid, vectors, false)
}

/// Sequential variant with identical output; used by the benchmarks to
/// compare against the rayon path.
pub fn convergence_sweep_seq(
    scheme: &ProductScheme,
    fs: &FormSum,
    t_grid: &[f64],
    n_grid: &[u64],
    vectors: &[CVec],
) -> Result<ConvergenceReport> {
    sweep_impl(scheme, fs, t_grid, n_grid, vectors, true)
}

fn sweep_impl(
    scheme: &ProductScheme,
    fs: &FormSum,
    t_grid: &[f64],
    n_grid: &[u64],
    vectors: &[CVec],
    sequential: bool,
) -> Result<ConvergenceReport> {
    if t_grid.is_empty() || n_grid.is_empty() || vectors.is_empty() {
        return Err(crate::error::Error::InvalidParameter(
            "sweep grids and vector set must be nonempty".into(),
        ));
    }
    debug_assert!(n_grid.windows(2).all(|w| w[0] < w[1]));
    let classifier = VectorClassifier::new(scheme, fs)?;
    let classes: Vec<VectorClass> = vectors.iter().map(|u| classifier.classify(u)).collect();
    let p_prime = fs.p_prime().clone();

    let n_cells = t_grid.len() * n_grid.len() * vectors.len();
    let per_t = n_grid.len() * vectors.len();
    let results: Vec<Result<ConvergenceCell>> = run_indexed(n_cells, sequential, |idx| {
        let ti = idx / per_t;
        let ni = (idx % per_t) / vectors.len();
        let vi = idx % vectors.len();
        let (t, n, u) = (t_grid[ti], n_grid[ni], &vectors[vi]);
        let error = strong_error(scheme, fs, t, n, u)?;
        // triangle bound from contraction + unitarity on H'
        let ceiling = u.norm() + projected_norm(&p_prime, u);
        assert!(
            error <= ceiling + 1e-6 * (1.0 + u.norm()),
            "strong error {error:.3e} above triangle bound {ceiling:.3e} at t={t}, n={n}"
        );
        Ok(ConvergenceCell {
            t,
            n,
            vector_index: vi,
            class: classes[vi],
            error,
        })
    });
    let cells: Vec<ConvergenceCell> = results.into_iter().collect::<Result<_>>()?;

    let mut series = Vec::with_capacity(t_grid.len() * vectors.len());
    for (ti, &t) in t_grid.iter().enumerate() {
        for vi in 0..vectors.len() {
            let errors: Vec<f64> = (0..n_grid.len())
                .map(|ni| cells[ti * per_t + ni * vectors.len() + vi].error)
                .collect();
            series.push(SeriesSummary {
                t,
                vector_index: vi,
                class: classes[vi],
                observed_order: observed_order(&errors),
                converged: converged(&errors),
            });
        }
    }

    Ok(ConvergenceReport {
        descriptor: format!(
            "dim {} / f={} g={}",
            scheme.dim(),
            scheme.f().name(),
            scheme.g().name()
        ),
        t_grid: t_grid.to_vec(),
        n_grid: n_grid.to_vec(),
        cells,
        series,
    })
}

/// Median of `log₂(e_i / e_{i+1})` over the pairs in the top half of the
/// grid; robust against preasymptotic noise. `None` if fewer than one pair
/// or if the errors sit at the floating-point floor.
pub fn observed_order(errors: &[f64]) -> Option<f64> {
    let len = errors.len();
    if len < 2 {
        return None;
    }
    let start = len / 2;
    let mut ratios = Vec::new();
    for i in start.max(1) - 1..len - 1 {
        let (e0, e1) = (errors[i], errors[i + 1]);
        if e0 < 1e-15 || e1 < 1e-15 {
            continue;
        }
        ratios.push((e0 / e1).log2());
    }
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    Some(if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        0.5 * (ratios[mid - 1] + ratios[mid])
    })
}

fn converged(errors: &[f64]) -> bool {
    let len = errors.len();
    if errors[len - 1] < tol::CONV_TOL {
        return true;
    }
    if len >= 4 {
        let tail = &errors[len - 4..];
        return tail.windows(2).all(|w| w[1] < w[0]);
    }
    false
}
