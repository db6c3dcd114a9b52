//! Track weighted L² norms of the solution under an admissible exponential
//! weight and fit the persistence constant: decay of the initial data is
//! propagated with at most exponential-in-time loss.

use novikov2c::diagnostics::NamedWeight;
use novikov2c::grid::{SpectralField, SpectralGrid};
use novikov2c::integrator::{run, RunHooks, StepControl};
use novikov2c::model::{FieldPair, ModelParams};
use novikov2c::output::DiagnosticsCollector;
use novikov2c::weights::WeightSpec;

fn main() -> novikov2c::Result<()> {
    let grid = SpectralGrid::new(256, 20.0)?;
    let lambda = 0.5;
    let params = ModelParams::new(1.0, lambda, vec![0.0, 0.0, 4.0 / 3.0])?;
    let init = FieldPair {
        u: SpectralField::from_fn(&grid, |x| 0.05 * (-x * x).exp()),
        rho: SpectralField::from_fn(&grid, |x| 0.05 * (-x * x).exp()),
        time: 0.0,
    };

    let weight = NamedWeight {
        name: "exp_half".to_string(),
        spec: WeightSpec::new(0.5, 1.0, 0.0, 0.0, 0.5, None)?,
        p: 2.0,
    };
    let mut collector = DiagnosticsCollector::new(vec![weight], 1);
    run(
        &params,
        init,
        &StepControl::new(2.0)?,
        RunHooks {
            observers: vec![&mut collector],
            ..Default::default()
        },
    )?;

    let w_of = |r: &novikov2c::diagnostics::DiagnosticsRecord| {
        let [wu, wux, wrho] = r.weighted[0].1;
        (wu * wu + wux * wux + wrho * wrho).sqrt()
    };
    let w0 = w_of(&collector.records[0]);
    let m_hat = collector
        .records
        .iter()
        .map(|r| r.max_abs_u + r.max_abs_ux + r.max_abs_rho)
        .fold(0.0_f64, f64::max);

    println!("{:>8} {:>14} {:>14}", "t", "W(t)", "log(W/W0)/t");
    let mut c_hat = 0.0_f64;
    for r in collector.records.iter().step_by(5) {
        let w = w_of(r);
        let slope = if r.time > 1e-9 {
            (w / w0).ln() / r.time
        } else {
            0.0
        };
        if r.time > 1e-9 {
            c_hat = c_hat.max((slope - lambda) / (m_hat * m_hat));
        }
        println!("{:8.3} {w:14.8e} {slope:14.6}", r.time);
    }
    println!("fitted persistence constant: {:.4} (M = {m_hat:.4})", c_hat.max(0.0));
    Ok(())
}
