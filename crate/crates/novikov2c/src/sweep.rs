//! Parameter sweeps: the Cartesian product of value axes applied to a base
//! scenario file, run on a small worker pool. Individual failures are
//! recorded in the summary instead of aborting the sweep.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::integrator::{run, RunHooks, RunStatus};
use crate::output::DiagnosticsCollector;
use crate::scenario::ScenarioConfig;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted path into the scenario TOML, e.g. "model.lambda".
    pub parameter: String,
    pub values: Vec<toml::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Base scenario file, relative to the sweep file's directory.
    pub base: PathBuf,
    #[serde(default)]
    pub axes: Vec<SweepAxis>,
    /// Worker threads; defaults to 4.
    pub workers: Option<usize>,
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: SweepConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("sweep file: {e}")))?;
        if let Some(dir) = path.parent() {
            cfg.base = dir.join(&cfg.base);
        }
        Ok(cfg)
    }
}

/// One summary row per sweep point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub params: Vec<(String, toml::Value)>,
    pub status: String,
    pub halt_time: f64,
    pub min_k_u_ux_final: f64,
    pub detail: String,
}

impl SweepRow {
    pub fn to_ndjson(&self) -> String {
        let mut params = serde_json::Map::new();
        for (key, value) in &self.params {
            params.insert(key.clone(), toml_to_json(value));
        }
        serde_json::json!({
            "params": params,
            "status": self.status,
            "halt_time": self.halt_time,
            "minKUUxFinal": self.min_k_u_ux_final,
            "detail": self.detail,
        })
        .to_string()
    }
}

fn toml_to_json(v: &toml::Value) -> serde_json::Value {
    match v {
        toml::Value::String(s) => serde_json::Value::String(s.clone()),
        toml::Value::Integer(i) => serde_json::json!(i),
        toml::Value::Float(f) => serde_json::json!(f),
        toml::Value::Boolean(b) => serde_json::json!(b),
        toml::Value::Array(a) => {
            serde_json::Value::Array(a.iter().map(toml_to_json).collect())
        }
        other => serde_json::Value::String(other.to_string()),
    }
}

fn set_dotted(root: &mut toml::Value, path: &str, value: toml::Value) -> Result<()> {
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad parameter path {path:?}")));
    }
    for part in &parts[..parts.len() - 1] {
        node = node
            .get_mut(*part)
            .ok_or_else(|| Error::Config(format!("parameter path {path:?}: missing table {part:?}")))?;
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| Error::Config(format!("parameter path {path:?} does not end in a table")))?;
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn cartesian_product(axes: &[SweepAxis]) -> Vec<Vec<(String, toml::Value)>> {
    let mut points: Vec<Vec<(String, toml::Value)>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.values.len());
        for point in &points {
            for value in &axis.values {
                let mut extended = point.clone();
                extended.push((axis.parameter.clone(), value.clone()));
                next.push(extended);
            }
        }
        points = next;
    }
    points
}

fn run_point(base: &toml::Value, point: &[(String, toml::Value)]) -> SweepRow {
    let mut row = SweepRow {
        params: point.to_vec(),
        status: "config_error".to_string(),
        halt_time: f64::NAN,
        min_k_u_ux_final: f64::NAN,
        detail: String::new(),
    };
    let attempt = || -> Result<(String, f64, f64, String)> {
        let mut doc = base.clone();
        for (path, value) in point {
            set_dotted(&mut doc, path, value.clone())?;
        }
        let cfg: ScenarioConfig = doc
            .try_into()
            .map_err(|e| Error::Config(format!("sweep point config: {e}")))?;
        let built = cfg.build()?;
        let mut collector = DiagnosticsCollector::new(built.weights.clone(), 1);
        let outcome = run(
            &built.params,
            built.initial,
            &built.ctrl,
            RunHooks {
                observers: vec![&mut collector],
                ..Default::default()
            },
        )?;
        let min_final = collector
            .records
            .last()
            .map_or(f64::NAN, |r| r.min_k_u_ux);
        Ok((
            outcome.status.as_str().to_string(),
            outcome.halt_time,
            min_final,
            outcome.halt_reason,
        ))
    };
    match attempt() {
        Ok((status, halt_time, min_final, detail)) => {
            row.status = status;
            row.halt_time = halt_time;
            row.min_k_u_ux_final = min_final;
            row.detail = detail;
        }
        Err(e) => {
            if matches!(e, Error::CorruptState { .. }) {
                row.status = RunStatus::CorruptState.as_str().to_string();
            }
            row.detail = e.to_string();
        }
    }
    row
}

/// Runs the whole sweep; rows come back in grid order regardless of which
/// worker finished first. An empty product is a configuration error.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let base_text = std::fs::read_to_string(&cfg.base)?;
    let base: toml::Value = base_text
        .parse()
        .map_err(|e| Error::Config(format!("base scenario: {e}")))?;
    let points = cartesian_product(&cfg.axes);
    if cfg.axes.is_empty() || points.is_empty() {
        return Err(Error::Config(
            "sweep produces an empty parameter grid".to_string(),
        ));
    }

    let workers = cfg.workers.unwrap_or(4).clamp(1, points.len());
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<SweepRow>>> = Mutex::new(vec![None; points.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= points.len() {
                    break;
                }
                let row = run_point(&base, &points[idx]);
                rows.lock().expect("sweep worker poisoned the row buffer")[idx] = Some(row);
            });
        }
    });
    Ok(rows
        .into_inner()
        .expect("sweep worker poisoned the row buffer")
        .into_iter()
        .map(|r| r.expect("every sweep index was claimed by a worker"))
        .collect())
}
