//! Order verification: a manufactured forcing makes e^{-t}sech(x) the exact
//! semidiscrete solution, isolating RK4's fourth-order temporal error, and
//! a grid-refinement pair shows the spectral spatial error collapse.

use novikov2c::convergence::{manufactured_temporal_ladder, spatial_refinement};
use novikov2c::grid::{SpectralField, SpectralGrid};
use novikov2c::model::{FieldPair, ModelParams};

fn main() -> novikov2c::Result<()> {
    let grid = SpectralGrid::new(128, 20.0)?;
    let params = ModelParams::new(1.0, 0.2, vec![0.0, 0.0, 4.0 / 3.0])?;

    let ladder = manufactured_temporal_ladder(&params, &grid, 0.5, 0.05, 4)?;
    println!("{:>10} {:>14} {:>8}", "dt", "error", "order");
    for (i, (dt, err)) in ladder.dts.iter().zip(&ladder.errors).enumerate() {
        if i == 0 {
            println!("{dt:10.5} {err:14.6e} {:>8}", "-");
        } else {
            println!("{dt:10.5} {err:14.6e} {:8.3}", ladder.orders[i - 1]);
        }
    }

    let spatial = spatial_refinement(
        &params,
        20.0,
        128,
        &|g| {
            let w: f64 = 0.65;
            Ok(FieldPair {
                u: SpectralField::from_fn(g, |x| 0.05 * (-(x / w) * (x / w)).exp()),
                rho: SpectralField::from_fn(g, |x| 0.05 * (-(x / w) * (x / w)).exp()),
                time: 0.0,
            })
        },
        0.5,
        0.01,
    )?;
    println!(
        "spatial: n = {:?} errors = {:?} (drop factor {:.1e})",
        spatial.n_values, spatial.errors, spatial.ratio
    );
    Ok(())
}
