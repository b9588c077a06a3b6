//! Propagates the unit quadratic and cubic line solitons on a coarse grid and
//! compares the peak with the analytic position `x0 + c t`.
//!
//! `cargo run --release --example soliton_propagation`

use std::f64::consts::PI;

use kp_elastic::analytic::{initial_condition, line_soliton, soliton_speed, SolitonParams};
use kp_elastic::material::{EquationKind, EquationSpec, SignBranch};
use kp_elastic::spectral::{diagnostics, make_grid, run, Domain, Field2D, Peak, SolverConfig};
use kp_elastic::validation::soliton_initial;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t_end = 0.5;
    for kind in [EquationKind::Quadratic, EquationKind::Cubic] {
        let grid = make_grid(128, 128, Domain::centered(4.0 * PI, 4.0 * PI))?;
        let config = SolverConfig::new(EquationSpec::canonical(kind, SignBranch::Plus), grid, 1e-3, t_end);
        let ic = soliton_initial(kind);
        let initial = Field2D::from_fn(&config.grid, |x, y| initial_condition(ic, x, y));
        let out = run(&config, &initial)?;
        let last = &out.snapshots.last().expect("final snapshot").field;

        let p = SolitonParams::new(kind, SignBranch::Plus, 1.0, 0.0, 0.0)?;
        let exact = Field2D::from_fn(&config.grid, |x, y| line_soliton(&p, t_end, x, y));
        let err = last
            .values()
            .iter()
            .zip(exact.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / exact.max_abs();

        let c = soliton_speed(kind, 1.0, 0.0);
        if let Peak::At { x, value, .. } = diagnostics(last).peak {
            println!("{kind}: speed {c}, peak at x = {x:.4} (expected {:.4}), amplitude {value:.5}, rel L-inf error {err:.2e}", c * t_end);
        }
    }
    Ok(())
}
