//! Deterministic CSV emission. All floats carry 17 significant digits so
//! that reports round-trip bit-exactly; no timestamps appear in any data
//! body.

use std::fmt::Write;

use crate::lab::{
    ConvergenceReport, EquicontinuityRow, ResolventMetricPoint, WeakIntegralResult,
};

/// 17 significant digits, scientific.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Identifying metadata echoed into every row of a report.
#[derive(Debug, Clone)]
pub struct ReportMeta {
    pub instance_id: String,
    pub scheme_f: String,
    pub scheme_g: String,
}

/// Columns: instance_id, scheme_f, scheme_g, t, n, vector_class, error,
/// observed_order, flag. Rows in `(t, n, vector)` order; `observed_order`
/// is the per-(t, vector) series median (empty at the floating-point
/// floor), `flag` is `converged` or `stalled`.
pub fn sweep_csv(meta: &ReportMeta, report: &ConvergenceReport) -> String {
    let mut out = String::new();
    out.push_str("instance_id,scheme_f,scheme_g,t,n,vector_class,error,observed_order,flag\n");
    let vectors = report
        .series
        .len()
        .checked_div(report.t_grid.len())
        .unwrap_or(0);
    let per_t = report.n_grid.len() * vectors;
    for (i, cell) in report.cells.iter().enumerate() {
        let ti = i / per_t.max(1);
        let summary = &report.series[ti * vectors + cell.vector_index];
        let order = summary
            .observed_order
            .map(fmt_float)
            .unwrap_or_default();
        let flag = if summary.converged {
            "converged"
        } else {
            "stalled"
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            meta.instance_id,
            meta.scheme_f,
            meta.scheme_g,
            fmt_float(cell.t),
            cell.n,
            cell.class,
            fmt_float(cell.error),
            order,
            flag
        )
        .expect("writing to string cannot fail");
    }
    out
}

/// Columns: instance_id, tau, metric, truncation_T, tail_bound.
pub fn metric_csv(instance_id: &str, rows: &[ResolventMetricPoint]) -> String {
    let mut out = String::new();
    out.push_str("instance_id,tau,metric,truncation_T,tail_bound\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            instance_id,
            fmt_float(r.tau),
            fmt_float(r.metric),
            fmt_float(r.truncation),
            fmt_float(r.tail_bound)
        )
        .expect("writing to string cannot fail");
    }
    out
}

/// Columns: instance_id, scheme_f, scheme_g, phi, vector_class,
/// vector_index, n, gap, ceiling.
pub fn weak_csv(
    meta: &ReportMeta,
    phi: &str,
    rows: &[(String, usize, u64, WeakIntegralResult)],
) -> String {
    let mut out = String::new();
    out.push_str("instance_id,scheme_f,scheme_g,phi,vector_class,vector_index,n,gap,ceiling\n");
    for (class, vi, n, r) in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            meta.instance_id,
            meta.scheme_f,
            meta.scheme_g,
            phi,
            class,
            vi,
            n,
            fmt_float(r.gap),
            fmt_float(r.ceiling)
        )
        .expect("writing to string cannot fail");
    }
    out
}

/// Columns: instance_id, tau, z_re, z_im, window, step, recon_error,
/// truncation_bound, kernel_mass.
#[allow(clippy::too_many_arguments)]
pub fn poisson_csv_row(
    instance_id: &str,
    tau: f64,
    z_re: f64,
    z_im: f64,
    window: f64,
    step: f64,
    recon_error: f64,
    truncation_bound: f64,
    kernel_mass: f64,
) -> String {
    let mut out = String::new();
    out.push_str(
        "instance_id,tau,z_re,z_im,window,step,recon_error,truncation_bound,kernel_mass\n",
    );
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        instance_id,
        fmt_float(tau),
        fmt_float(z_re),
        fmt_float(z_im),
        fmt_float(window),
        fmt_float(step),
        fmt_float(recon_error),
        fmt_float(truncation_bound),
        fmt_float(kernel_mass)
    )
    .expect("writing to string cannot fail");
    out
}

/// Columns: instance_id, t0, delta, modulus, worst_tau.
pub fn equicontinuity_csv(instance_id: &str, t0: f64, rows: &[EquicontinuityRow]) -> String {
    let mut out = String::new();
    out.push_str("instance_id,t0,delta,modulus,worst_tau\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            instance_id,
            fmt_float(t0),
            fmt_float(r.delta),
            fmt_float(r.modulus),
            fmt_float(r.worst_tau)
        )
        .expect("writing to string cannot fail");
    }
    out
}
