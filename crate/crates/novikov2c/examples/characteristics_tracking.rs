//! Advance characteristics q' = k·u²(t,q) in lockstep with the PDE and
//! check the two Lagrangian identities: the Jacobian is the exponential of
//! the accumulated 2k·u·u_x, and ρ·q_x^{1/2} is carried along trajectories.

use novikov2c::characteristics::{verify_jacobian, verify_transport, TrajectorySet};
use novikov2c::grid::{SpectralField, SpectralGrid};
use novikov2c::integrator::{run, RunHooks, StepControl};
use novikov2c::model::{FieldPair, ModelParams};

fn main() -> novikov2c::Result<()> {
    let grid = SpectralGrid::new(256, 20.0)?;
    let params = ModelParams::new(1.0, 0.5, vec![0.0, 0.0, 4.0 / 3.0])?;
    let init = FieldPair {
        u: SpectralField::from_fn(&grid, |x| 0.05 * (-x * x).exp()),
        rho: SpectralField::from_fn(&grid, |x| 0.05 * (-x * x).exp()),
        time: 0.0,
    };
    let rho0 = init.rho.clone();

    let mut trajectories = TrajectorySet::equispaced(65, 4.0)?;
    let outcome = run(
        &params,
        init,
        &StepControl::new(1.0)?,
        RunHooks {
            trajectories: Some(&mut trajectories),
            ..Default::default()
        },
    )?;

    println!("{:>8} {:>12} {:>14} {:>14}", "x0", "q(1,x0)", "log q_x", "log transport");
    for i in (0..trajectories.len()).step_by(4) {
        println!(
            "{:8.3} {:12.6} {:14.6e} {:14.6e}",
            trajectories.labels()[i],
            trajectories.positions()[i],
            trajectories.jacobian_log()[i],
            trajectories.transport_log()[i],
        );
    }

    let jac = verify_jacobian(&trajectories)?;
    let transport = verify_transport(&trajectories, &outcome.final_state.rho, &rho0)?;
    println!(
        "jacobian: rel gap {:.3e}, monotone {}, positive {}",
        jac.max_rel_discrepancy, jac.positions_monotone, jac.fd_jacobian_positive
    );
    println!(
        "transport: rel gap {:.3e}, invariant rel gap {:.3e}",
        transport.max_rel_transport, transport.max_rel_invariant
    );
    Ok(())
}
