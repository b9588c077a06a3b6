//! Distance at which the dispersionless reduction steepens into a shock, for
//! a sinusoidal input and both nonlinearities.
//!
//! `cargo run --example shock_distance`

use std::f64::consts::PI;

use kp_elastic::analytic::shock_distance;
use kp_elastic::material::EquationKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 512;
    let period = 2.0 * PI;
    for amplitude in [0.5, 1.0, 2.0] {
        let profile: Vec<f64> = (0..n).map(|i| amplitude * (2.0 * PI * i as f64 / n as f64).sin()).collect();
        let quad = shock_distance(&profile, period, EquationKind::Quadratic, 1.0)?;
        let cubic = shock_distance(&profile, period, EquationKind::Cubic, 1.0)?;
        println!("amplitude {amplitude}: quadratic chi_s = {quad:?}, cubic chi_s = {cubic:?}");
    }
    // characteristics never cross for a constant input
    let flat = vec![1.0; n];
    println!("constant input: {:?}", shock_distance(&flat, period, EquationKind::Quadratic, 1.0)?);
    Ok(())
}
