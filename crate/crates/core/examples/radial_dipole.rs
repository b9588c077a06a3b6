//! Dipole initial data for both equations: stays finite and bounded, sheds
//! oscillations behind the front and keeps its y-parity.
//!
//! `cargo run --release --example radial_dipole`

use kp_elastic::material::EquationKind;
use kp_elastic::validation::radial_run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [EquationKind::Quadratic, EquationKind::Cubic] {
        let r = radial_run(kind)?;
        println!(
            "{kind}: max|u| {:.3} -> {:.3}, sign changes on y = 0: {} -> {}, parity error {:.1e}, {}",
            r.max_initial,
            r.max_seen,
            r.oscillations.0,
            r.oscillations.1,
            r.parity,
            if r.passed() { "ok" } else { "unexpected" }
        );
    }
    Ok(())
}
