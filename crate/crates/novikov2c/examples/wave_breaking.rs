//! Drive a steep antisymmetric profile toward wave breaking and watch the
//! detector halt the run once min k·u·u_x crosses the configured threshold.
//! The exit status of the `run` subcommand maps this outcome to code 2.

use novikov2c::diagnostics::breaking_monitor;
use novikov2c::grid::{SpectralField, SpectralGrid};
use novikov2c::integrator::{run, Observer, RunHooks, RunStatus, StepControl};
use novikov2c::model::{FieldPair, ModelParams};

struct MonitorLog {
    rows: Vec<(f64, f64)>,
}

impl Observer for MonitorLog {
    fn on_step(&mut self, params: &ModelParams, state: &FieldPair) -> novikov2c::Result<()> {
        self.rows.push((state.time, breaking_monitor(params, state)?));
        Ok(())
    }
}

fn main() -> novikov2c::Result<()> {
    let grid = SpectralGrid::new(256, 20.0)?;
    let params = ModelParams::new(1.0, 0.0, vec![0.0, 0.0, 4.0 / 3.0])?;
    // d/dx of a Gaussian: zero at the crest, steepest in the middle
    let init = FieldPair {
        u: SpectralField::from_fn(&grid, |x| -2.0 * x * (-x * x).exp()),
        rho: SpectralField::zeros(&grid),
        time: 0.0,
    };

    let ctrl = StepControl {
        breaking_threshold: -2.5,
        ..StepControl::new(5.0)?
    };
    let mut log = MonitorLog { rows: Vec::new() };
    let outcome = run(
        &params,
        init,
        &ctrl,
        RunHooks {
            observers: vec![&mut log],
            ..Default::default()
        },
    )?;

    println!("{:>8} {:>12}", "t", "min k*u*u_x");
    for (t, m) in &log.rows {
        println!("{t:8.4} {m:12.6}");
    }
    println!("halt: {} — {}", outcome.status.as_str(), outcome.halt_reason);
    assert_eq!(outcome.status, RunStatus::BreakingDetected);
    Ok(())
}
