//! Executes a resolved configuration: builds the instance and scheme, runs
//! the selected experiments, writes one report file per experiment plus a
//! manifest, and checks the hard runtime invariants (step contraction,
//! resolvent contraction, energy identity).
//!
//! Reports contain no timestamps; the manifest carries one in a dedicated
//! field that determinism checks exclude.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;
use thiserror::Error;

use trotter_lab::exec::map_indexed;
use trotter_lab::kato::{builtin, validate, Builtin, HalfPlaneGrid, KatoFunction};
use trotter_lab::lab::{
    convergence_sweep, equicontinuity_probe, poisson_convolve, resolvent_metric, weak_integral,
    BoundarySamples, Quadrature, ResolventMetricPoint, VectorClass, WeightedMeasure,
};
use trotter_lab::report::{
    equicontinuity_csv, metric_csv, poisson_csv_row, sweep_csv, weak_csv, ReportMeta,
};
use trotter_lab::{
    form_sum, operator_norm, parse_kato_name, CVec, FormSum, ProductScheme, C64,
};

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::instance::{Instance, RNG_ALGORITHM};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("lab error: {0}")]
    Lab(#[from] trotter_lab::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    /// Report file names in write order (manifest last).
    pub files: Vec<String>,
    pub instance_id: String,
    pub invariant_violations: Vec<String>,
}

impl RunOutcome {
    pub fn invariants_ok(&self) -> bool {
        self.invariant_violations.is_empty()
    }
}

const BATTERY_STREAM: u64 = 9;

pub fn run_scenario(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    cfg.validate()?;
    let instance = crate::scenario::build_instance(cfg)?;
    let f = parse_kato_name(&cfg.kato_f)?;
    let g = parse_kato_name(&cfg.kato_g)?;
    let scheme = ProductScheme::new(instance.a.clone(), instance.b.clone(), f, g)?;
    let fs = form_sum(&instance.a, &instance.b)?;

    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| RunError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;

    let meta = ReportMeta {
        instance_id: instance.id.clone(),
        scheme_f: cfg.kato_f.clone(),
        scheme_g: cfg.kato_g.clone(),
    };

    let mut files = Vec::new();
    for kind in &cfg.experiments {
        let content = match kind {
            ExperimentKind::Strong => strong_report(cfg, &scheme, &fs, &instance, &meta)?,
            ExperimentKind::Weak => weak_report(cfg, &scheme, &fs, &instance, &meta)?,
            ExperimentKind::ResolventMetric => metric_report(cfg, &scheme, &fs, &instance)?,
            ExperimentKind::Poisson => poisson_report(cfg, &scheme, &instance)?,
            ExperimentKind::Equicontinuity => equicontinuity_report(cfg, &scheme, &instance)?,
            ExperimentKind::ValidateKato => kato_report()?,
        };
        let name = kind.file_name();
        write_file(cfg, name, &content)?;
        files.push(name.to_string());
    }

    let violations = invariant_battery(cfg, &scheme);

    let manifest = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "rng": RNG_ALGORITHM,
        "scenario": cfg.scenario,
        "instance_id": instance.id,
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "files": files,
        "invariants_ok": violations.is_empty(),
        "violations": violations,
        "generated_at_unix": SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    });
    let manifest_text =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_file(cfg, "manifest.json", &manifest_text)?;
    files.push("manifest.json".to_string());

    Ok(RunOutcome {
        output_dir: cfg.output_dir.clone(),
        files,
        instance_id: instance.id,
        invariant_violations: manifest["violations"]
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|v| v.as_str().unwrap_or_default().to_string())
                    .collect()
            })
            .unwrap_or_default(),
    })
}

fn write_file(cfg: &ExperimentConfig, name: &str, content: &str) -> Result<(), RunError> {
    let path = cfg.output_dir.join(name);
    std::fs::write(&path, content).map_err(|source| RunError::Io { path, source })
}

fn strong_report(
    cfg: &ExperimentConfig,
    scheme: &ProductScheme,
    fs: &FormSum,
    instance: &Instance,
    meta: &ReportMeta,
) -> Result<String, RunError> {
    let t_grid = cfg.t_grid.resolve();
    let n_grid = cfg.n_grid.resolve();
    let vectors: Vec<CVec> = instance.probes.iter().map(|p| p.vector.clone()).collect();
    let report = convergence_sweep(scheme, fs, &t_grid, &n_grid, &vectors)?;
    Ok(sweep_csv(meta, &report))
}

fn weak_report(
    cfg: &ExperimentConfig,
    scheme: &ProductScheme,
    fs: &FormSum,
    instance: &Instance,
    meta: &ReportMeta,
) -> Result<String, RunError> {
    let phi = cfg.phi.profile()?;
    let (lo, hi) = phi.default_quadrature().interval();
    let q = Quadrature::new(
        trotter_lab::lab::QuadRule::CompositeSimpson,
        lo,
        hi,
        cfg.phi.points,
    )?;
    let mut rows = Vec::new();
    for (vi, probe) in instance.probes.iter().enumerate() {
        for &n in &cfg.n_grid.resolve() {
            let result = weak_integral(scheme, fs, &phi, &probe.vector, n, &q)?;
            rows.push((probe.class.to_string(), vi, n, result));
        }
    }
    Ok(weak_csv(meta, &phi.name(), &rows))
}

fn metric_report(
    cfg: &ExperimentConfig,
    scheme: &ProductScheme,
    fs: &FormSum,
    instance: &Instance,
) -> Result<String, RunError> {
    let wm = WeightedMeasure::new(cfg.measure.truncation, cfg.measure.points)?;
    let u = designated_probe(instance);
    let mut rows = Vec::new();
    for tau in cfg.tau_grid.resolve() {
        let metric = resolvent_metric(scheme, fs, tau, u, &wm)?;
        rows.push(ResolventMetricPoint {
            tau,
            metric,
            truncation: wm.truncation(),
            tail_bound: wm.tail_bound(),
        });
    }
    Ok(metric_csv(&instance.id, &rows))
}

fn poisson_report(
    cfg: &ExperimentConfig,
    scheme: &ProductScheme,
    instance: &Instance,
) -> Result<String, RunError> {
    let p = &cfg.poisson;
    let u = designated_probe(instance);
    let s_lo = p.z_im - p.window;
    let count = (2.0 * p.window / p.step).round() as usize + 1;
    let boundary: Vec<trotter_lab::Result<CVec>> = map_indexed(count, |j| {
        let s = s_lo + p.step * j as f64;
        scheme.resolvent(C64::new(0.0, s), p.tau, u)
    });
    let values: Vec<CVec> = boundary
        .into_iter()
        .collect::<trotter_lab::Result<_>>()?;
    let samples = BoundarySamples {
        s_lo,
        step: p.step,
        values,
    };
    let rec = poisson_convolve(&samples, p.z_re, p.z_im)?;
    let direct = scheme.resolvent(C64::new(p.z_re, p.z_im), p.tau, u)?;
    let recon_error = (&rec.value - direct).norm();
    Ok(poisson_csv_row(
        &instance.id,
        p.tau,
        p.z_re,
        p.z_im,
        p.window,
        p.step,
        recon_error,
        rec.truncation_bound,
        rec.kernel_mass,
    ))
}

fn equicontinuity_report(
    cfg: &ExperimentConfig,
    scheme: &ProductScheme,
    instance: &Instance,
) -> Result<String, RunError> {
    let u = designated_probe(instance);
    let taus = cfg.tau_grid.resolve();
    let rows = equicontinuity_probe(
        scheme,
        cfg.equicontinuity.t0,
        &taus,
        &cfg.equicontinuity.deltas,
        u,
    )?;
    Ok(equicontinuity_csv(&instance.id, cfg.equicontinuity.t0, &rows))
}

fn kato_report() -> Result<String, RunError> {
    let functions: Vec<(KatoFunction, bool)> = vec![
        (builtin(Builtin::ExpNeg)?, true),
        (builtin(Builtin::Resolvent)?, true),
        (builtin(Builtin::IteratedResolvent(2))?, true),
        (builtin(Builtin::IteratedResolvent(8))?, true),
        (builtin(Builtin::IteratedResolvent(50))?, true),
        (KatoFunction::new("cos", |z: C64| z.cos()), false),
    ];
    let grid = HalfPlaneGrid::default();
    let entries: Vec<serde_json::Value> = functions
        .iter()
        .map(|(f, expected)| {
            let report = validate(f, &grid);
            json!({
                "name": f.name(),
                "expected_admissible": expected,
                "report": report.as_json(),
            })
        })
        .collect();
    Ok(serde_json::to_string_pretty(&serde_json::Value::Array(entries)).expect("serializes") + "\n")
}

/// Vector the single-vector experiments run on: the first mixed-class
/// probe when one exists (it exercises every component), else the first
/// probe.
fn designated_probe(instance: &Instance) -> &CVec {
    instance
        .probes
        .iter()
        .find(|p| p.class == VectorClass::Other)
        .map(|p| &p.vector)
        .unwrap_or(&instance.probes[0].vector)
}

/// Hard runtime invariants sampled over seeded random parameters:
/// `‖F(it)‖ ≤ 1`, `‖(I+S_{it,τ})^{-1}u‖ ≤ ‖u‖`, and the energy identity.
fn invariant_battery(cfg: &ExperimentConfig, scheme: &ProductScheme) -> Vec<String> {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(BATTERY_STREAM);
    let mut violations = Vec::new();
    let d = scheme.dim();

    for _ in 0..24 {
        let t: f64 = rng.gen_range(-10.0..10.0);
        match scheme.step(C64::new(0.0, t)) {
            Ok(fmat) => {
                let norm = operator_norm(&fmat);
                if norm > 1.0 + 1e-10 {
                    violations.push(format!("contraction: ||F(i{t:.6})|| = {norm:.3e} > 1"));
                }
            }
            Err(e) => violations.push(format!("step failed at t = {t:.6}: {e}")),
        }
    }

    for _ in 0..40 {
        let t: f64 = rng.gen_range(-10.0..10.0);
        let tau = 10f64.powf(rng.gen_range(-4.0..0.0));
        let mut u = CVec::from_fn(d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = u.norm();
        if norm == 0.0 {
            continue;
        }
        u /= C64::new(norm, 0.0);
        match scheme.resolvent(C64::new(0.0, t), tau, &u) {
            Ok(w) => {
                if w.norm() > 1.0 + 1e-10 {
                    violations.push(format!(
                        "resolvent contraction: ||w|| = {:.12} at t = {t:.6}, tau = {tau:.3e}",
                        w.norm()
                    ));
                }
            }
            Err(e) => violations.push(format!("resolvent failed: {e}")),
        }
        match scheme.energy_residual(t, tau, &u) {
            Ok(r) => {
                let bound = 1e-9 * (1.0 / tau).max(1.0);
                if r > bound {
                    violations.push(format!(
                        "energy identity: residual {r:.3e} > {bound:.3e} at t = {t:.6}, tau = {tau:.3e}"
                    ));
                }
            }
            Err(e) => violations.push(format!("energy residual failed: {e}")),
        }
    }
    violations
}
