//! Residual of the travelling-wave reduction for the sampled line solitons.
//! On a finite periodic window the residual is set by how far the soliton
//! tail has decayed at the window edge, so it shrinks as the window grows.
//!
//! `cargo run --example boussinesq_check`

use std::f64::consts::PI;

use kp_elastic::analytic::{boussinesq_residual, line_soliton, SolitonParams};
use kp_elastic::material::{EquationKind, SignBranch};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 256;
    for kind in [EquationKind::Quadratic, EquationKind::Cubic] {
        let p = SolitonParams::new(kind, SignBranch::Plus, 1.0, 0.0, 0.0)?;
        for half in [4.0 * PI, 8.0 * PI] {
            let length = 2.0 * half;
            let profile: Vec<f64> = (0..n).map(|i| line_soliton(&p, 0.0, -half + length * i as f64 / n as f64, 0.0)).collect();
            let r = boussinesq_residual(&profile, length, p.speed(), kind, SignBranch::Plus)?;
            println!("{kind}, window ±{:.0}pi: residual {r:.2e}", half / PI);
        }
    }
    Ok(())
}
