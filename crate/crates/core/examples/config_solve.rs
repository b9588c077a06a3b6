//! Parses a run configuration with a `[material]` block, integrates it and
//! prints the diagnostics series.
//!
//! `cargo run --release --example config_solve`

use kp_elastic::io::config::parse_config;
use kp_elastic::spectral::run;

const CONFIG: &str = "\
equation = cubic

[material]
mu = 1
rho0 = 1
landau_a = 0
landau_d = 0
nu0 = 1

[grid]
nx = 128
ny = 64
x_min = -8pi
x_max = 8pi
y_min = -4pi
y_max = 4pi

[run]
dt = 1e-3
t_end = 0.2
initial = radial_cubic
snapshot_times = 0, 0.1, 0.2
diagnostics_stride = 50
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(CONFIG)?;
    println!("{} branch, config digest {}", cfg.branch(), cfg.digest());
    let out = run(&cfg.solver_config(), &cfg.initial_field())?;
    for d in &out.diagnostics {
        let g = &d.diagnostics;
        println!("step {:4} t = {:.3}: mean {:+.2e}, L2 {:.6}, range [{:.4}, {:.4}]", d.step, d.time, g.mean, g.l2_norm, g.min, g.max);
    }
    println!("{} snapshots at t = {:?}", out.snapshots.len(), out.snapshots.iter().map(|s| s.sim_time).collect::<Vec<_>>());
    Ok(())
}
