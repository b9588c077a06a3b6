//! From material constants to the canonical equation: wave speeds,
//! nonlinearity coefficients, branch and the coordinate scale factors.
//!
//! `cargo run --example material_to_canonical`

use kp_elastic::material::{
    beta3_landau, beta_quadratic, wave_speeds, Dispersion, EquationSpec, MaterialCompressible,
    MaterialIncompressible, TaylorConstants,
};
use kp_elastic::transforms::{
    canonical_field_to_physical_velocity, map_coords, physical_coords, scale_factors, Direction, PhysicalPoint,
    PhysicalScaling, Regime,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a compressible solid with second- and third-order constants (arbitrary units)
    let taylor = TaylorConstants { alpha1: -2.0, alpha2: 1.0, gamma0: 1.0, gamma1: 0.5, gamma2: 0.2 };
    let m = MaterialCompressible::new(2.0, 1.0, 1.0, taylor, Dispersion::Dimensionless(0.5))?;
    let speeds = wave_speeds(&m)?;
    let spec = EquationSpec::from_compressible(&m)?;
    println!("compressible: c_l = {:.6}, c_t = {:.6}, beta = {:.6}", speeds.longitudinal, speeds.transverse, beta_quadratic(&m)?);
    println!("  -> {} equation, {} branch", spec.kind(), spec.branch());
    let s = scale_factors(&spec);
    println!("  scale factors s_t = {:.6}, s_x = {:.6}, s_y = {:.6}", s.s_t, s.s_x, s.s_y);

    // a slow-variable point and back
    let slow = [0.3, -1.2, 2.0];
    let canon = map_coords(slow, &s, Direction::Forward);
    let back = map_coords(canon, &s, Direction::Inverse);
    println!("  (chi, tau, eta) {slow:?} -> (t, x, y) {canon:?} -> {back:?}");

    // incompressible (shear) solid with Landau constants
    let m = MaterialIncompressible::new(1.0, 1.0, 0.0, 0.0, Dispersion::Dimensionless(1.0))?;
    let spec = EquationSpec::from_incompressible(&m)?;
    println!("incompressible: c_t = {}, beta3 = {}, {} branch", m.shear_speed(), beta3_landau(&m), spec.branch());

    let ps = PhysicalScaling { epsilon: 0.01, length: 1e-3, speed: m.shear_speed(), regime: Regime::Incompressible };
    let p = physical_coords(PhysicalPoint { x: 0.5, y: 1e-3, t: 1e-4 }, &ps);
    println!("  physical (x, y, t) = (0.5, 1e-3, 1e-4) -> (chi, tau, eta) = ({:.4}, {:.4}, {:.4})", p.chi, p.tau, p.eta);
    println!("  canonical amplitude 1 -> particle velocity {:.3e}", canonical_field_to_physical_velocity(1.0, &ps));
    Ok(())
}
