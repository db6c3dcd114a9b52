//! Observers that collect per-step data during a run, and the writers
//! that persist diagnostics NDJSON and field-snapshot CSV files.

use std::io::Write;
use std::path::Path;

use crate::diagnostics::{DiagnosticsRecord, NamedWeight};
use crate::error::Result;
use crate::integrator::Observer;
use crate::model::{momentum_density, FieldPair, ModelParams};

/// Collects a [`DiagnosticsRecord`] every `stride` accepted steps (the
/// initial state is always recorded).
pub struct DiagnosticsCollector {
    weights: Vec<NamedWeight>,
    stride: usize,
    calls: usize,
    pub records: Vec<DiagnosticsRecord>,
}

impl DiagnosticsCollector {
    pub fn new(weights: Vec<NamedWeight>, stride: usize) -> Self {
        DiagnosticsCollector {
            weights,
            stride: stride.max(1),
            calls: 0,
            records: Vec::new(),
        }
    }
}

impl Observer for DiagnosticsCollector {
    fn on_step(&mut self, params: &ModelParams, state: &FieldPair) -> Result<()> {
        if self.calls % self.stride == 0 {
            self.records
                .push(DiagnosticsRecord::compute(params, state, &self.weights)?);
        }
        self.calls += 1;
        Ok(())
    }
}

/// Keeps field snapshots every `stride` steps; stride 0 keeps only the
/// initial state (the final state is written separately by the caller).
pub struct SnapshotCollector {
    stride: usize,
    calls: usize,
    pub snapshots: Vec<FieldPair>,
}

impl SnapshotCollector {
    pub fn new(stride: usize) -> Self {
        SnapshotCollector {
            stride,
            calls: 0,
            snapshots: Vec::new(),
        }
    }
}

impl Observer for SnapshotCollector {
    fn on_step(&mut self, _params: &ModelParams, state: &FieldPair) -> Result<()> {
        let due = match self.stride {
            0 => self.calls == 0,
            s => self.calls % s == 0,
        };
        if due {
            self.snapshots.push(state.clone());
        }
        self.calls += 1;
        Ok(())
    }
}

/// Write diagnostics records as NDJSON, one object per line.
pub fn write_diagnostics_ndjson(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    for rec in records {
        writeln!(file, "{}", rec.to_ndjson())?;
    }
    file.flush()?;
    Ok(())
}

/// Snapshot CSV with columns x, u, rho, y.
pub fn snapshot_csv(state: &FieldPair) -> Result<String> {
    let y = momentum_density(state)?;
    let mut out = String::from("x,u,rho,y\n");
    let xs = state.u.grid().points();
    for j in 0..xs.len() {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            xs[j],
            state.u.values()[j],
            state.rho.values()[j],
            y.values()[j]
        ));
    }
    Ok(out)
}

pub fn write_snapshot(path: &Path, state: &FieldPair) -> Result<()> {
    std::fs::write(path, snapshot_csv(state)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SpectralField, SpectralGrid};
    use crate::model::ModelParams;

    #[test]
    fn collector_respects_stride() {
        let g = SpectralGrid::new(32, 10.0).unwrap();
        let params = ModelParams::new(1.0, 0.0, vec![]).unwrap();
        let state = FieldPair {
            u: SpectralField::zeros(&g),
            rho: SpectralField::zeros(&g),
            time: 0.0,
        };
        let mut c = DiagnosticsCollector::new(vec![], 3);
        for _ in 0..7 {
            c.on_step(&params, &state).unwrap();
        }
        assert_eq!(c.records.len(), 3); // calls 0, 3, 6
    }

    #[test]
    fn snapshot_csv_shape() {
        let g = SpectralGrid::new(16, 5.0).unwrap();
        let state = FieldPair {
            u: SpectralField::from_fn(&g, |x| x.sin()),
            rho: SpectralField::zeros(&g),
            time: 0.0,
        };
        let csv = snapshot_csv(&state).unwrap();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "x,u,rho,y");
    }
}
