//! Load a scenario from TOML, build it, run it, and write the full artifact
//! set (diagnostics NDJSON, snapshot CSVs, trajectory CSV, manifest) — the
//! same path the `run` subcommand takes. Set NOVIKOV2C_OUTPUT_ROOT to
//! redirect the output directory.

use novikov2c::characteristics::{trajectories_csv, TrajectorySet};
use novikov2c::integrator::{run, RunHooks};
use novikov2c::output::{write_diagnostics_ndjson, write_snapshot, DiagnosticsCollector};
use novikov2c::scenario::ScenarioConfig;

const SCENARIO: &str = r#"
[grid]
n_modes = 256
half_length = 20.0

[model]
k = 1.0
lambda = 0.5
g_coeffs = [0.0, 0.0, 1.3333333333333333]

[initial.u]
kind = "gaussian"
amplitude = 0.05

[initial.rho]
kind = "gaussian"
amplitude = 0.05
width = 2.0

[control]
t_end = 1.0

[[weights]]
name = "exp_half"
a = 0.5
b = 1.0
c = 0.0
d = 0.0
p = 2.0

[trajectories]
count = 17
span = 5.0

[output]
directory = "scenario_example"
snapshot_stride = 10
"#;

fn main() -> novikov2c::Result<()> {
    let cfg = ScenarioConfig::from_toml(SCENARIO)?;
    let built = cfg.build()?;
    std::fs::create_dir_all(&built.output_dir)?;

    let mut diagnostics =
        DiagnosticsCollector::new(built.weights.clone(), built.diagnostics_stride);
    let mut trajectories = built
        .trajectories
        .as_ref()
        .map(|t| TrajectorySet::equispaced(t.count, t.span))
        .transpose()?;

    let outcome = run(
        &built.params,
        built.initial,
        &built.ctrl,
        RunHooks {
            observers: vec![&mut diagnostics],
            trajectories: trajectories.as_mut(),
            forcing: None,
        },
    )?;

    write_diagnostics_ndjson(
        &built.output_dir.join("diagnostics.ndjson"),
        &diagnostics.records,
    )?;
    write_snapshot(&built.output_dir.join("snapshot_final.csv"), &outcome.final_state)?;
    if let Some(ts) = &trajectories {
        std::fs::write(built.output_dir.join("trajectories.csv"), trajectories_csv(ts))?;
    }

    println!(
        "{} at t = {:.3} ({} steps); config hash {}; artifacts in {}",
        outcome.status.as_str(),
        outcome.halt_time,
        outcome.steps,
        built.config_hash,
        built.output_dir.display()
    );
    Ok(())
}
