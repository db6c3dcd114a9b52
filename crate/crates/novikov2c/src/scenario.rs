//! Scenario configuration: TOML ingestion with aggregated validation,
//! initial-data construction, and the run manifest.
//!
//! Physical parameters (k, λ, g) have no defaults; numerical controls do.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::NamedWeight;
use crate::error::{Error, Result};
use crate::grid::{GridRef, SpectralField, SpectralGrid};
use crate::integrator::{RunOutcome, StepControl};
use crate::model::{FieldPair, ModelParams};
use crate::weights::WeightSpec;

/// Environment variable that, when set, becomes the root for all relative
/// output directories.
pub const OUTPUT_ROOT_ENV: &str = "NOVIKOV2C_OUTPUT_ROOT";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSection {
    pub n_modes: usize,
    pub half_length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSection {
    pub k: f64,
    pub lambda: f64,
    pub g_coeffs: Vec<f64>,
}

/// One initial field. `width` rescales x where it applies.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldInit {
    Zero,
    /// A·e^{-(x/width)²}
    Gaussian {
        amplitude: f64,
        #[serde(default = "default_width")]
        width: f64,
    },
    /// A·d/dx e^{-(x/width)²}, the steep antisymmetric profile
    GaussianSlope {
        amplitude: f64,
        #[serde(default = "default_width")]
        width: f64,
    },
    /// A·sin(mode·πx/L)
    Sine {
        amplitude: f64,
        #[serde(default = "default_mode")]
        mode: usize,
    },
    /// A·sech(x/width)
    Sech {
        amplitude: f64,
        #[serde(default = "default_width")]
        width: f64,
    },
    /// A·e^{-√(x²+ε²)}: smooth stand-in for the peakon profile, which
    /// itself sits outside the H^s (s > 3/2) well-posedness class
    MollifiedPeakon {
        amplitude: f64,
        epsilon: f64,
    },
    /// Two-column samples (x, value), one row per grid point
    File { path: PathBuf },
}

fn default_width() -> f64 {
    1.0
}
fn default_mode() -> usize {
    1
}

impl FieldInit {
    pub fn build(&self, grid: &GridRef) -> Result<SpectralField> {
        match self {
            FieldInit::Zero => Ok(SpectralField::zeros(grid)),
            FieldInit::Gaussian { amplitude, width } => {
                let (a, w) = (*amplitude, *width);
                Ok(SpectralField::from_fn(grid, |x| {
                    a * (-(x / w) * (x / w)).exp()
                }))
            }
            FieldInit::GaussianSlope { amplitude, width } => {
                let (a, w) = (*amplitude, *width);
                Ok(SpectralField::from_fn(grid, |x| {
                    a * (-2.0 * x / (w * w)) * (-(x / w) * (x / w)).exp()
                }))
            }
            FieldInit::Sine { amplitude, mode } => {
                let (a, m) = (*amplitude, *mode as f64);
                let l = grid.half_length();
                Ok(SpectralField::from_fn(grid, |x| {
                    a * (m * std::f64::consts::PI * x / l).sin()
                }))
            }
            FieldInit::Sech { amplitude, width } => {
                let (a, w) = (*amplitude, *width);
                Ok(SpectralField::from_fn(grid, |x| a / (x / w).cosh()))
            }
            FieldInit::MollifiedPeakon { amplitude, epsilon } => {
                let (a, eps) = (*amplitude, *epsilon);
                Ok(SpectralField::from_fn(grid, |x| {
                    a * (-(x * x + eps * eps).sqrt()).exp()
                }))
            }
            FieldInit::File { path } => {
                let text = std::fs::read_to_string(path)?;
                let mut values = Vec::new();
                for (lineno, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let cols: Vec<&str> = line
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .collect();
                    if cols.len() != 2 {
                        return Err(Error::Config(format!(
                            "{}:{}: expected two columns, got {}",
                            path.display(),
                            lineno + 1,
                            cols.len()
                        )));
                    }
                    let v: f64 = cols[1].parse().map_err(|e| {
                        Error::Config(format!("{}:{}: {e}", path.display(), lineno + 1))
                    })?;
                    values.push(v);
                }
                if values.len() != grid.len() {
                    return Err(Error::Config(format!(
                        "{}: {} samples do not match n_modes = {}",
                        path.display(),
                        values.len(),
                        grid.len()
                    )));
                }
                SpectralField::from_values(grid.clone(), values.into())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitialSection {
    pub u: FieldInit,
    pub rho: FieldInit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ControlSection {
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_breaking_threshold")]
    pub breaking_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_dt: Option<f64>,
}

fn default_cfl() -> f64 {
    0.3
}
fn default_dt_min() -> f64 {
    1e-10
}
fn default_dt_max() -> f64 {
    0.05
}
fn default_breaking_threshold() -> f64 {
    -1e6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSection {
    pub name: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl WeightSection {
    pub fn to_named_weight(&self) -> Result<NamedWeight> {
        if !(self.p >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "weight '{}': p must be >= 2 or inf, got {}",
                self.name, self.p
            )));
        }
        let theta = self
            .theta
            .unwrap_or(1.0 + self.a + self.c.abs() + self.d.abs());
        Ok(NamedWeight {
            name: self.name.clone(),
            spec: WeightSpec::new(self.a, self.b, self.c, self.d, theta, self.truncation)?,
            p: self.p,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectorySection {
    pub count: usize,
    pub span: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputSection {
    pub directory: PathBuf,
    /// Steps between field snapshots; 0 means final state only.
    #[serde(default)]
    pub snapshot_stride: usize,
    #[serde(default = "default_diag_stride")]
    pub diagnostics_stride: usize,
}

fn default_diag_stride() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub grid: GridSection,
    pub model: ModelSection,
    pub initial: InitialSection,
    pub control: ControlSection,
    #[serde(default)]
    pub weights: Vec<WeightSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<TrajectorySection>,
    pub output: OutputSection,
}

/// Everything a run needs, constructed from a validated config.
#[derive(Debug)]
pub struct BuiltScenario {
    pub grid: GridRef,
    pub params: ModelParams,
    pub initial: FieldPair,
    pub ctrl: StepControl,
    pub weights: Vec<NamedWeight>,
    pub output_dir: PathBuf,
    pub snapshot_stride: usize,
    pub diagnostics_stride: usize,
    pub trajectories: Option<TrajectorySection>,
    pub config_hash: String,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Stable content hash of the resolved (defaults applied) config.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        format!("{:x}", hasher.finalize())
    }

    /// Validate everything, aggregating failures into one report.
    pub fn build(&self) -> Result<BuiltScenario> {
        let mut problems: Vec<String> = Vec::new();

        let grid = match SpectralGrid::new(self.grid.n_modes, self.grid.half_length) {
            Ok(g) => Some(g),
            Err(e) => {
                problems.push(format!("grid: {e}"));
                None
            }
        };
        let params = match ModelParams::new(
            self.model.k,
            self.model.lambda,
            self.model.g_coeffs.clone(),
        ) {
            Ok(p) => Some(p),
            Err(e) => {
                problems.push(format!("model: {e}"));
                None
            }
        };
        let ctrl = {
            let c = StepControl {
                cfl: self.control.cfl,
                dt_min: self.control.dt_min,
                dt_max: self.control.dt_max,
                t_end: self.control.t_end,
                breaking_threshold: self.control.breaking_threshold,
                fixed_dt: self.control.fixed_dt,
            };
            match c.validate() {
                Ok(()) => Some(c),
                Err(e) => {
                    problems.push(format!("control: {e}"));
                    None
                }
            }
        };
        let mut weights = Vec::new();
        for w in &self.weights {
            match w.to_named_weight() {
                Ok(nw) => weights.push(nw),
                Err(e) => problems.push(format!("weight '{}': {e}", w.name)),
            }
        }
        if let Some(t) = &self.trajectories {
            if t.count < 2 {
                problems.push("trajectories: count must be >= 2".to_string());
            }
            if !(t.span > 0.0) {
                problems.push("trajectories: span must be positive".to_string());
            }
        }

        let initial = grid.as_ref().and_then(|g| {
            let u = self.initial.u.build(g);
            let rho = self.initial.rho.build(g);
            match (u, rho) {
                (Ok(u), Ok(rho)) => Some(FieldPair { u, rho, time: 0.0 }),
                (u, rho) => {
                    if let Err(e) = u {
                        problems.push(format!("initial.u: {e}"));
                    }
                    if let Err(e) = rho {
                        problems.push(format!("initial.rho: {e}"));
                    }
                    None
                }
            }
        });

        // boundary decay advisory: spectral accuracy needs localized data
        // to have effectively vanished at the domain edge. Intrinsically
        // periodic or user-supplied data is exempt.
        let localized = |f: &FieldInit| !matches!(f, FieldInit::Sine { .. } | FieldInit::File { .. });
        if let (Some(init), true) = (
            &initial,
            localized(&self.initial.u) && localized(&self.initial.rho),
        ) {
            let n = init.u.grid().len();
            let edge = init.u.values()[0]
                .abs()
                .max(init.u.values()[n - 1].abs())
                .max(init.rho.values()[0].abs())
                .max(init.rho.values()[n - 1].abs());
            let scale = init.u.max_abs().max(init.rho.max_abs());
            if scale > 0.0 && edge > 1e-10 * scale {
                problems.push(format!(
                    "initial data does not decay at the boundary (|edge|/|max| = {:.2e}); \
                     increase half_length",
                    edge / scale
                ));
            }
        }

        if !problems.is_empty() {
            return Err(Error::Config(problems.join("; ")));
        }

        let output_dir = resolve_output_dir(&self.output.directory);
        Ok(BuiltScenario {
            grid: grid.unwrap(),
            params: params.unwrap(),
            initial: initial.unwrap(),
            ctrl: ctrl.unwrap(),
            weights,
            output_dir,
            snapshot_stride: self.output.snapshot_stride,
            diagnostics_stride: self.output.diagnostics_stride,
            trajectories: self.trajectories.clone(),
            config_hash: self.hash(),
        })
    }
}

/// Relative output directories resolve under `NOVIKOV2C_OUTPUT_ROOT` when
/// it is set.
pub fn resolve_output_dir(dir: &Path) -> PathBuf {
    if dir.is_absolute() {
        return dir.to_path_buf();
    }
    match std::env::var_os(OUTPUT_ROOT_ENV) {
        Some(root) => PathBuf::from(root).join(dir),
        None => dir.to_path_buf(),
    }
}

/// Terminal record of one run, written atomically next to its artifacts.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub status: String,
    pub halt_time: f64,
    pub halt_reason: String,
    pub steps: usize,
    pub wall_time_secs: f64,
    pub final_min_k_u_ux: f64,
    /// max over recorded steps of |E(t)e^{2λt}/E(0) - 1|; NaN when E(0)=0.
    pub energy_law_max_defect: f64,
    /// max over recorded steps of |R2(t)/R2(0) - 1|; NaN when R2(0)=0.
    pub rho_mass_max_defect: f64,
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, json)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Exit code contract: breaking is a scientific result, not a failure.
pub fn exit_code_for(outcome: &RunOutcome) -> i32 {
    use crate::integrator::RunStatus;
    match outcome.status {
        RunStatus::Completed => 0,
        RunStatus::BreakingDetected => 2,
        RunStatus::CorruptState => 1,
    }
}
