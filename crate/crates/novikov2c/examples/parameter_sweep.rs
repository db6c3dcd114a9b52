//! Run a small Cartesian parameter sweep over damping and data amplitude,
//! collecting one summary row per point without any files beyond the two
//! TOML inputs this example writes to a temporary directory.

use std::io::Write;

use novikov2c::sweep::{run_sweep, SweepConfig};

const BASE: &str = r#"
[grid]
n_modes = 128
half_length = 15.0

[model]
k = 1.0
lambda = 0.0
g_coeffs = [0.0, 0.0, 1.3333333333333333]

[initial.u]
kind = "gaussian"
amplitude = 0.05

[initial.rho]
kind = "gaussian"
amplitude = 0.05

[control]
t_end = 0.5

[output]
directory = "sweep_point"
"#;

const SWEEP: &str = r#"
base = "base.toml"

[[axes]]
parameter = "model.lambda"
values = [0.0, 0.25, 0.5]

[[axes]]
parameter = "initial.u.amplitude"
values = [0.02, 0.08]
"#;

fn main() -> novikov2c::Result<()> {
    let dir = std::env::temp_dir().join("novikov2c_sweep_example");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("base.toml"), BASE)?;
    let sweep_path = dir.join("sweep.toml");
    let mut f = std::fs::File::create(&sweep_path)?;
    writeln!(f, "{SWEEP}")?;

    let cfg = SweepConfig::from_path(&sweep_path)?;
    let rows = run_sweep(&cfg)?;
    for row in &rows {
        println!("{}", row.to_ndjson());
    }
    println!("{} points", rows.len());
    Ok(())
}
