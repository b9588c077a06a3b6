//! Writes a field in both snapshot formats and reads it back bit for bit.
//!
//! `cargo run --example snapshot_round_trip`

use std::f64::consts::PI;

use kp_elastic::analytic::{initial_condition, InitialCondition};
use kp_elastic::io::snapshot::{read_snapshot, write_snapshot, EquationTag, Snapshot, SnapshotFormat};
use kp_elastic::material::{EquationKind, SignBranch};
use kp_elastic::spectral::{make_grid, Domain, Field2D};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = make_grid(64, 32, Domain::centered(4.0 * PI, 2.0 * PI))?;
    let field = Field2D::from_fn(&grid, |x, y| initial_condition(InitialCondition::RadialQuad, x, y));
    let snap = Snapshot {
        field,
        sim_time: 0.125,
        equation: EquationTag { kind: EquationKind::Quadratic, branch: SignBranch::Plus },
        config_digest: "0".repeat(64),
    };
    let dir = tempfile::tempdir()?;
    for format in [SnapshotFormat::F64Le, SnapshotFormat::Csv] {
        let path = dir.path().join(format!("radial.{}", format.extension()));
        write_snapshot(&snap, &path, format)?;
        let back = read_snapshot(&path)?;
        let bytes = std::fs::metadata(&path)?.len();
        println!("{format:?}: {bytes} bytes, identical after round trip: {}", back == snap);
    }
    Ok(())
}
