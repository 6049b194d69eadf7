//! Scenario registry: named experiment setups with complete default
//! configurations and instance recipes.

use nalgebra::DMatrix;

use trotter_lab::lab::VectorClass;
use trotter_lab::{CMat, CVec, DegenerateOperator, Result, Subspace, C64};

use crate::config::{
    Dims, DyadicGrid, EquicontinuitySpec, ExperimentConfig, ExperimentKind, GridSpec,
    MeasureSpec, PhiSpec, PoissonSpec, PowTwoGrid,
};
use crate::instance::{instance_hash, make_probes, scalar_instance, Instance, Probe};

pub struct ScenarioInfo {
    pub name: &'static str,
    pub summary: &'static str,
}

pub fn list_scenarios() -> Vec<ScenarioInfo> {
    vec![
        ScenarioInfo {
            name: "scalar-exact",
            summary: "a = b = α on ℂ¹ with f = g = exp: the iterates are exact for every n",
        },
        ScenarioInfo {
            name: "nondegenerate-exp",
            summary: "random 8×8 full-subspace pair, f = g = exp: first-order strong convergence",
        },
        ScenarioInfo {
            name: "nondegenerate-resolvent",
            summary: "same pair with f = res, g = res^8: convergence for resolvent-type functions",
        },
        ScenarioInfo {
            name: "degenerate-c4",
            summary: "ℂ⁴ with 3-dim subspaces (2-dim common domain): the degenerate theorem end to end",
        },
        ScenarioInfo {
            name: "orthogonal-subspaces",
            summary: "orthogonal 1-dim subspaces of ℂ⁴: pure decay, empty common domain",
        },
        ScenarioInfo {
            name: "schrodinger-1d",
            summary: "Dirichlet Laplacian + diagonal potential (d = 32, scalable): the split-operator case",
        },
        ScenarioInfo {
            name: "kato-validate-all",
            summary: "admissibility checks for all builtin functions plus the cos counterexample",
        },
        ScenarioInfo {
            name: "poisson-boundary",
            summary: "recover (I+S_{z,τ})^{-1}u in the interior from imaginary-axis samples",
        },
        ScenarioInfo {
            name: "equicontinuity-probe",
            summary: "empirical modulus of continuity of t ↦ w_{t,τ}, uniform over τ",
        },
    ]
}

fn base_config(scenario: &str) -> ExperimentConfig {
    ExperimentConfig {
        scenario: scenario.to_string(),
        seed: 7,
        dims: Dims { d: 4, ka: 3, kb: 3 },
        spectrum_bound: 2.0,
        kato_f: "exp".into(),
        kato_g: "exp".into(),
        t_grid: GridSpec::Values {
            values: vec![0.5, 1.0, 2.0],
        },
        n_grid: PowTwoGrid { k_lo: 0, k_hi: 12 },
        tau_grid: DyadicGrid { k_lo: 1, k_hi: 10 },
        phi: PhiSpec {
            name: "gaussian".into(),
            param: 1.0,
            points: 321,
        },
        measure: MeasureSpec {
            truncation: 50.0,
            points: 16001,
        },
        poisson: PoissonSpec {
            tau: 0.05,
            z_re: 0.3,
            z_im: 0.2,
            window: 40.0,
            step: 0.01,
        },
        equicontinuity: EquicontinuitySpec {
            t0: 1.0,
            deltas: vec![0.5, 0.2, 0.1, 0.05, 0.02, 0.01],
        },
        probes_per_class: 2,
        output_dir: "lab-out".into(),
        experiments: vec![ExperimentKind::Strong],
    }
}

/// Complete default configuration for a registered scenario, or `None`.
pub fn default_config(name: &str) -> Option<ExperimentConfig> {
    let mut cfg = base_config(name);
    match name {
        "scalar-exact" => {
            cfg.dims = Dims { d: 1, ka: 1, kb: 1 };
            cfg.spectrum_bound = 0.7;
        }
        "nondegenerate-exp" => {
            cfg.dims = Dims { d: 8, ka: 8, kb: 8 };
            cfg.spectrum_bound = 5.0;
        }
        "nondegenerate-resolvent" => {
            cfg.dims = Dims { d: 8, ka: 8, kb: 8 };
            cfg.spectrum_bound = 5.0;
            cfg.kato_f = "res".into();
            cfg.kato_g = "res^8".into();
        }
        "degenerate-c4" => {
            cfg.experiments = vec![
                ExperimentKind::Strong,
                ExperimentKind::Weak,
                ExperimentKind::ResolventMetric,
                ExperimentKind::Poisson,
                ExperimentKind::Equicontinuity,
            ];
        }
        "orthogonal-subspaces" => {
            cfg.dims = Dims { d: 4, ka: 1, kb: 1 };
        }
        "schrodinger-1d" => {
            cfg.dims = Dims { d: 32, ka: 32, kb: 32 };
            cfg.spectrum_bound = 2.0;
            cfg.t_grid = GridSpec::Values {
                values: vec![0.5, 1.0],
            };
        }
        "kato-validate-all" => {
            cfg.dims = Dims { d: 1, ka: 1, kb: 1 };
            cfg.spectrum_bound = 1.0;
            cfg.experiments = vec![ExperimentKind::ValidateKato];
        }
        "poisson-boundary" => {
            cfg.dims = Dims { d: 6, ka: 4, kb: 4 };
            cfg.experiments = vec![ExperimentKind::Poisson];
        }
        "equicontinuity-probe" => {
            cfg.experiments = vec![ExperimentKind::Equicontinuity];
        }
        _ => return None,
    }
    Some(cfg)
}

/// Builds the instance a scenario runs on.
pub fn build_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    match cfg.scenario.as_str() {
        "scalar-exact" => scalar_instance(cfg.spectrum_bound),
        "kato-validate-all" => scalar_instance(1.0),
        "orthogonal-subspaces" => orthogonal_instance(cfg),
        "schrodinger-1d" => schrodinger_instance(cfg),
        _ => crate::instance::gen_random_instance(
            cfg.seed,
            (cfg.dims.d, cfg.dims.ka, cfg.dims.kb),
            cfg.spectrum_bound,
            cfg.probes_per_class,
        ),
    }
}

/// `M_A = span{e₀}` with `A = [1]`, `M_B = span{e₁}` with `B = [2]` in ℂ⁴:
/// the common domain is empty and every vector decays.
fn orthogonal_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    let d = cfg.dims.d.max(2);
    let a = DegenerateOperator::new(
        Subspace::coordinate(d, &[0]),
        DMatrix::from_row_slice(1, 1, &[C64::new(1.0, 0.0)]),
    )?;
    let b = DegenerateOperator::new(
        Subspace::coordinate(d, &[1]),
        DMatrix::from_row_slice(1, 1, &[C64::new(2.0, 0.0)]),
    )?;
    let probes = make_probes(cfg.seed, &a, &b, cfg.probes_per_class)?;
    Ok(Instance {
        id: instance_hash(&a, &b),
        a,
        b,
        probes,
    })
}

/// Dirichlet second-difference Laplacian (spectral norm < 4) as `A` and a
/// diagonal quadratic potential scaled to `spectrum_bound` as `B`, both on
/// the full space. The designated performance scenario; scale with
/// `--set dims.d=256`.
fn schrodinger_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    let d = cfg.dims.d;
    let mut lap = CMat::zeros(d, d);
    for i in 0..d {
        lap[(i, i)] = C64::new(2.0, 0.0);
        if i + 1 < d {
            lap[(i, i + 1)] = C64::new(-1.0, 0.0);
            lap[(i + 1, i)] = C64::new(-1.0, 0.0);
        }
    }
    let grid_x = |i: usize| -1.0 + 2.0 * (i + 1) as f64 / (d + 1) as f64;
    let mut pot = CMat::zeros(d, d);
    for i in 0..d {
        let x = grid_x(i);
        pot[(i, i)] = C64::new(cfg.spectrum_bound * x * x, 0.0);
    }
    let a = DegenerateOperator::full(lap)?;
    let b = DegenerateOperator::full(pot)?;

    // Gaussian wave packet plus the generic seeded probes
    let mut packet = CVec::from_fn(d, |i, _| {
        let x = grid_x(i);
        let envelope = (-(x - 0.2) * (x - 0.2) / (2.0 * 0.15 * 0.15)).exp();
        C64::new(0.0, 8.0 * x).exp() * envelope
    });
    let norm = packet.norm();
    packet /= C64::new(norm, 0.0);
    let mut probes = vec![Probe {
        class: VectorClass::HPrime,
        vector: packet,
    }];
    probes.extend(make_probes(cfg.seed, &a, &b, cfg.probes_per_class)?);
    Ok(Instance {
        id: instance_hash(&a, &b),
        a,
        b,
        probes,
    })
}
