//! Experiment configuration: a single JSON document, deep-merged over the
//! selected scenario's defaults, with dotted-path overrides from the
//! command line. Identical configs produce byte-identical reports.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config must be a JSON object")]
    NotAnObject,
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("unknown scenario {0:?}; run `lab list`")]
    UnknownScenario(String),
    #[error("override path {0:?} does not exist in the config")]
    UnknownOverridePath(String),
    #[error("invalid --set argument {0:?}; expected path=value")]
    MalformedOverride(String),
    #[error("field {field}: {problem}")]
    Invalid { field: &'static str, problem: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub d: usize,
    pub ka: usize,
    pub kb: usize,
}

/// Explicit values or a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values { values: Vec<f64> },
    Linspace { lo: f64, hi: f64, count: usize },
}

impl GridSpec {
    pub fn resolve(&self) -> Vec<f64> {
        match self {
            GridSpec::Values { values } => values.clone(),
            GridSpec::Linspace { lo, hi, count } => {
                if *count == 1 {
                    return vec![*lo];
                }
                (0..*count)
                    .map(|i| lo + (hi - lo) * i as f64 / (*count as f64 - 1.0))
                    .collect()
            }
        }
    }
}

/// Powers of two `2^k_lo ..= 2^k_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowTwoGrid {
    pub k_lo: u32,
    pub k_hi: u32,
}

impl PowTwoGrid {
    pub fn resolve(&self) -> Vec<u64> {
        (self.k_lo..=self.k_hi).map(|k| 1u64 << k).collect()
    }
}

/// Dyadic tau grid `2^{-k_lo} ..= 2^{-k_hi}` (decreasing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicGrid {
    pub k_lo: u32,
    pub k_hi: u32,
}

impl DyadicGrid {
    pub fn resolve(&self) -> Vec<f64> {
        (self.k_lo..=self.k_hi)
            .map(|k| 2f64.powi(-(k as i32)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiSpec {
    /// `gaussian`, `box`, or `cauchy`.
    pub name: String,
    /// σ for `gaussian`, half-width for `box`, ignored for `cauchy`.
    pub param: f64,
    /// Quadrature points for the weak integrals (odd).
    pub points: usize,
}

impl PhiSpec {
    pub fn profile(&self) -> Result<trotter_lab::lab::PhiProfile, ConfigError> {
        use trotter_lab::lab::PhiProfile;
        match self.name.as_str() {
            "gaussian" => Ok(PhiProfile::Gaussian(self.param)),
            "box" => Ok(PhiProfile::Box(self.param)),
            "cauchy" => Ok(PhiProfile::Cauchy),
            other => Err(ConfigError::Invalid {
                field: "phi.name",
                problem: format!("unknown profile {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub truncation: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonSpec {
    pub tau: f64,
    pub z_re: f64,
    pub z_im: f64,
    pub window: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquicontinuitySpec {
    pub t0: f64,
    pub deltas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Strong,
    Weak,
    ResolventMetric,
    Poisson,
    Equicontinuity,
    ValidateKato,
}

impl ExperimentKind {
    pub fn file_name(&self) -> &'static str {
        match self {
            ExperimentKind::Strong => "strong.csv",
            ExperimentKind::Weak => "weak.csv",
            ExperimentKind::ResolventMetric => "resolvent_metric.csv",
            ExperimentKind::Poisson => "poisson.csv",
            ExperimentKind::Equicontinuity => "equicontinuity.csv",
            ExperimentKind::ValidateKato => "kato_validation.json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub seed: u64,
    pub dims: Dims,
    pub spectrum_bound: f64,
    pub kato_f: String,
    pub kato_g: String,
    pub t_grid: GridSpec,
    pub n_grid: PowTwoGrid,
    pub tau_grid: DyadicGrid,
    pub phi: PhiSpec,
    pub measure: MeasureSpec,
    pub poisson: PoissonSpec,
    pub equicontinuity: EquicontinuitySpec,
    /// Probe vectors drawn per nonempty vector class.
    pub probes_per_class: usize,
    pub output_dir: PathBuf,
    pub experiments: Vec<ExperimentKind>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |field: &'static str, problem: String| Err(ConfigError::Invalid { field, problem });
        if self.dims.d == 0 {
            return fail("dims.d", "ambient dimension must be >= 1".into());
        }
        if self.dims.ka > self.dims.d || self.dims.kb > self.dims.d {
            return fail("dims", format!(
                "subspace dims ({}, {}) must not exceed ambient dim {}",
                self.dims.ka, self.dims.kb, self.dims.d
            ));
        }
        if self.spectrum_bound <= 0.0 {
            return fail("spectrum_bound", "must be positive".into());
        }
        if self.t_grid.resolve().is_empty() {
            return fail("t_grid", "must be nonempty".into());
        }
        if self.n_grid.k_lo > self.n_grid.k_hi {
            return fail("n_grid", "k_lo must be <= k_hi".into());
        }
        if self.n_grid.k_hi >= 63 {
            return fail("n_grid.k_hi", "2^k must fit in u64".into());
        }
        if self.tau_grid.k_lo > self.tau_grid.k_hi {
            return fail("tau_grid", "k_lo must be <= k_hi".into());
        }
        if self.phi.points % 2 == 0 || self.phi.points < 3 {
            return fail("phi.points", "must be odd and >= 3".into());
        }
        if self.measure.truncation <= 0.0 {
            return fail("measure.truncation", "must be positive".into());
        }
        if self.measure.points % 2 == 0 || self.measure.points < 3 {
            return fail("measure.points", "must be odd and >= 3".into());
        }
        if self.poisson.tau <= 0.0 || self.poisson.z_re <= 0.0 {
            return fail("poisson", "tau and z_re must be positive".into());
        }
        if self.poisson.step <= 0.0 || self.poisson.window < 50.0 * self.poisson.z_re {
            return fail("poisson", format!(
                "window {} must be >= 50 * z_re = {}",
                self.poisson.window,
                50.0 * self.poisson.z_re
            ));
        }
        if self.equicontinuity.t0 == 0.0 {
            return fail("equicontinuity.t0", "must be nonzero".into());
        }
        if self.probes_per_class == 0 {
            return fail("probes_per_class", "must be >= 1".into());
        }
        if self.experiments.is_empty() {
            return fail("experiments", "must select at least one experiment".into());
        }
        trotter_lab::parse_kato_name(&self.kato_f).map_err(|e| ConfigError::Invalid {
            field: "kato_f",
            problem: e.to_string(),
        })?;
        trotter_lab::parse_kato_name(&self.kato_g).map_err(|e| ConfigError::Invalid {
            field: "kato_g",
            problem: e.to_string(),
        })?;
        Ok(())
    }
}

/// Recursively merges `patch` over `base`: objects merge key-by-key,
/// everything else replaces.
pub fn deep_merge(base: &mut serde_json::Value, patch: serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(base_map), serde_json::Value::Object(patch_map)) => {
            for (k, v) in patch_map {
                match base_map.get_mut(&k) {
                    Some(slot) => deep_merge(slot, v),
                    None => {
                        base_map.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Applies `--set path.to.leaf=value` overrides. The path must already
/// exist (typo protection); the value is parsed as JSON, falling back to a
/// plain string.
pub fn apply_overrides(
    value: &mut serde_json::Value,
    sets: &[String],
) -> Result<(), ConfigError> {
    for set in sets {
        let (path, raw) = set
            .split_once('=')
            .ok_or_else(|| ConfigError::MalformedOverride(set.clone()))?;
        let new_value: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let mut slot = &mut *value;
        for key in path.split('.') {
            slot = match slot {
                serde_json::Value::Object(map) => map
                    .get_mut(key)
                    .ok_or_else(|| ConfigError::UnknownOverridePath(path.to_string()))?,
                serde_json::Value::Array(items) => {
                    let idx: usize = key
                        .parse()
                        .map_err(|_| ConfigError::UnknownOverridePath(path.to_string()))?;
                    items
                        .get_mut(idx)
                        .ok_or_else(|| ConfigError::UnknownOverridePath(path.to_string()))?
                }
                _ => return Err(ConfigError::UnknownOverridePath(path.to_string())),
            };
        }
        *slot = new_value;
    }
    Ok(())
}

/// Loads a config file, merges it over the scenario defaults, applies the
/// overrides, and validates.
pub fn load_config(path: &Path, sets: &[String]) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let user: serde_json::Value = serde_json::from_str(&text)?;
    resolve_config(user, sets)
}

/// Same as [`load_config`] but starting from an in-memory document.
pub fn resolve_config(
    user: serde_json::Value,
    sets: &[String],
) -> Result<ExperimentConfig, ConfigError> {
    let obj = user.as_object().ok_or(ConfigError::NotAnObject)?;
    let scenario = obj
        .get("scenario")
        .and_then(|v| v.as_str())
        .ok_or(ConfigError::MissingField("scenario"))?
        .to_string();
    let defaults = crate::scenario::default_config(&scenario)
        .ok_or_else(|| ConfigError::UnknownScenario(scenario.clone()))?;
    let mut merged = serde_json::to_value(&defaults).expect("config serializes");
    deep_merge(&mut merged, user);
    apply_overrides(&mut merged, sets)?;
    let cfg: ExperimentConfig = serde_json::from_value(merged)?;
    cfg.validate()?;
    Ok(cfg)
}
