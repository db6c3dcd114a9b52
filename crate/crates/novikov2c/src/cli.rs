//! Command implementations behind the thin binary: single runs, parameter
//! sweeps, the self-check suite, and refinement studies. Each returns a
//! process exit code; 2 marks a detected breaking time, which is a result,
//! not a failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::convergence::{
    manufactured_temporal_ladder, perturbation_divergence, spatial_refinement,
};
use crate::error::Result;
use crate::integrator::{run, RunHooks};
use crate::model::FieldPair;
use crate::output::{
    write_diagnostics_ndjson, write_snapshot, DiagnosticsCollector, SnapshotCollector,
};
use crate::scenario::{exit_code_for, resolve_output_dir, RunManifest, ScenarioConfig};
use crate::sweep::{run_sweep, SweepConfig};
use crate::verify::{run_checks, VerifyFaults};

#[derive(Parser)]
#[command(name = "novikov2c", version, about = "Simulator for a weakly dissipative two-component Novikov system")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write its artifacts.
    Run { config: PathBuf },
    /// Run the Cartesian product of parameter axes over a base scenario.
    Sweep { sweepfile: PathBuf },
    /// Run the named self-checks.
    Verify(VerifyArgs),
    /// Temporal/spatial refinement and perturbation studies for a scenario.
    Convergence { config: PathBuf },
}

#[derive(Args)]
struct VerifyArgs {
    /// Only run checks whose name contains this substring.
    #[arg(long)]
    filter: Option<String>,
    /// Fault injection: perturb the Helmholtz multiplier table.
    #[arg(long, hide = true)]
    fault_corrupt_helmholtz: bool,
    /// Fault injection: integrate the decay-law check with the wrong λ.
    #[arg(long, hide = true)]
    fault_lambda_mismatch: bool,
}

pub fn main() -> i32 {
    match Cli::parse().command {
        Command::Run { config } => fallible(|| cmd_run(&config)),
        Command::Sweep { sweepfile } => fallible(|| cmd_sweep(&sweepfile)),
        Command::Verify(args) => cmd_verify(&args),
        Command::Convergence { config } => fallible(|| cmd_convergence(&config)),
    }
}

fn fallible(f: impl FnOnce() -> Result<i32>) -> i32 {
    match f() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn cmd_run(config: &Path) -> Result<i32> {
    let cfg = ScenarioConfig::from_path(config)?;
    let built = cfg.build()?;
    std::fs::create_dir_all(&built.output_dir)?;

    let mut diagnostics = DiagnosticsCollector::new(built.weights.clone(), built.diagnostics_stride);
    let mut snapshots = SnapshotCollector::new(built.snapshot_stride);
    let mut trajectories = built
        .trajectories
        .as_ref()
        .map(|t| crate::characteristics::TrajectorySet::equispaced(t.count, t.span))
        .transpose()?;

    let started = Instant::now();
    let outcome = run(
        &built.params,
        built.initial,
        &built.ctrl,
        RunHooks {
            observers: vec![&mut diagnostics, &mut snapshots],
            trajectories: trajectories.as_mut(),
            forcing: None,
        },
    )?;
    let wall = started.elapsed().as_secs_f64();

    let mut artifacts = Vec::new();
    let diag_path = built.output_dir.join("diagnostics.ndjson");
    write_diagnostics_ndjson(&diag_path, &diagnostics.records)?;
    artifacts.push("diagnostics.ndjson".to_string());

    for (i, snap) in snapshots.snapshots.iter().enumerate() {
        let name = format!("snapshot_{i:04}.csv");
        write_snapshot(&built.output_dir.join(&name), snap)?;
        artifacts.push(name);
    }
    write_snapshot(&built.output_dir.join("snapshot_final.csv"), &outcome.final_state)?;
    artifacts.push("snapshot_final.csv".to_string());

    if let Some(ts) = &trajectories {
        let path = built.output_dir.join("trajectories.csv");
        std::fs::write(&path, crate::characteristics::trajectories_csv(ts))?;
        artifacts.push("trajectories.csv".to_string());
    }

    let lambda = built.params.lambda();
    let (mut energy_defect, mut rho_defect) = (f64::NAN, f64::NAN);
    if let Some(first) = diagnostics.records.first() {
        if first.energy > 0.0 {
            energy_defect = diagnostics
                .records
                .iter()
                .map(|r| ((r.energy / first.energy) * (2.0 * lambda * r.time).exp() - 1.0).abs())
                .fold(0.0, f64::max);
        }
        if first.rho_mass2 > 0.0 {
            rho_defect = diagnostics
                .records
                .iter()
                .map(|r| (r.rho_mass2 / first.rho_mass2 - 1.0).abs())
                .fold(0.0, f64::max);
        }
    }
    let final_min = diagnostics
        .records
        .last()
        .map_or(f64::NAN, |r| r.min_k_u_ux);

    artifacts.push("manifest.json".to_string());
    let manifest = RunManifest {
        config_hash: built.config_hash.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        status: outcome.status.as_str().to_string(),
        halt_time: outcome.halt_time,
        halt_reason: outcome.halt_reason.clone(),
        steps: outcome.steps,
        wall_time_secs: wall,
        final_min_k_u_ux: final_min,
        energy_law_max_defect: energy_defect,
        rho_mass_max_defect: rho_defect,
        artifacts,
    };
    manifest.write_atomic(&built.output_dir.join("manifest.json"))?;

    println!(
        "{} at t = {:.6} after {} steps; artifacts in {}",
        outcome.status.as_str(),
        outcome.halt_time,
        outcome.steps,
        built.output_dir.display()
    );
    Ok(exit_code_for(&outcome))
}

fn cmd_sweep(sweepfile: &Path) -> Result<i32> {
    let cfg = SweepConfig::from_path(sweepfile)?;
    let rows = run_sweep(&cfg)?;
    let dir = resolve_output_dir(Path::new("sweep"));
    std::fs::create_dir_all(&dir)?;
    let mut summary = String::new();
    for row in &rows {
        let line = row.to_ndjson();
        println!("{line}");
        summary.push_str(&line);
        summary.push('\n');
    }
    let path = dir.join("sweep_summary.ndjson");
    std::fs::write(&path, summary)?;
    eprintln!("{} sweep points; summary in {}", rows.len(), path.display());
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let faults = VerifyFaults {
        corrupt_helmholtz: args.fault_corrupt_helmholtz,
        lambda_mismatch: args.fault_lambda_mismatch,
    };
    let results = run_checks(&faults, args.filter.as_deref());
    if results.is_empty() {
        eprintln!("no check matches filter {:?}", args.filter.as_deref().unwrap_or(""));
        return 1;
    }
    let mut failures = 0usize;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {} — {}", r.name, r.detail);
        failures += usize::from(!r.passed);
    }
    println!("{} checks, {} failed", results.len(), failures);
    if failures == 0 {
        0
    } else {
        1
    }
}

fn cmd_convergence(config: &Path) -> Result<i32> {
    let cfg = ScenarioConfig::from_path(config)?;
    let built = cfg.build()?;
    let grid = built.initial.u.grid().clone();

    let t_ladder = built.ctrl.t_end.min(1.0);
    let ladder = manufactured_temporal_ladder(&built.params, &grid, t_ladder, built.ctrl.dt_max, 4)?;
    println!(
        "{}",
        serde_json::json!({
            "study": "temporal_order",
            "dts": ladder.dts,
            "errors": ladder.errors,
            "orders": ladder.orders,
        })
    );

    let initial_cfg = cfg.initial.clone();
    let t_spatial = built.ctrl.t_end.min(0.5);
    let spatial = spatial_refinement(
        &built.params,
        grid.half_length(),
        grid.len() / 2,
        &|g| {
            Ok(FieldPair {
                u: initial_cfg.u.build(g)?,
                rho: initial_cfg.rho.build(g)?,
                time: 0.0,
            })
        },
        t_spatial,
        built.ctrl.dt_max / 4.0,
    )?;
    println!(
        "{}",
        serde_json::json!({
            "study": "spatial_refinement",
            "n": spatial.n_values,
            "errors": spatial.errors,
            "ratio": spatial.ratio,
        })
    );

    let perturbation = perturbation_divergence(&built.params, &built.initial, &built.ctrl, 1e-6)?;
    println!(
        "{}",
        serde_json::json!({
            "study": "perturbation",
            "delta_initial": perturbation.delta_initial,
            "delta_final": perturbation.delta_final,
        })
    );
    Ok(0)
}
