//! End-to-end runs of the `kp` binary.

use std::path::Path;
use std::process::{Command, Output};

use kp_elastic::io::snapshot::read_snapshot;

fn kp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kp")).args(args).output().expect("spawn kp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = "\
equation = quadratic
branch = plus

[grid]
nx = 32
ny = 16
x_min = -4pi
x_max = 4pi
y_min = -2pi
y_max = 2pi

[run]
dt = 1e-3
t_end = 0.01
initial = soliton_quad
snapshot_times = 0, 0.005, 0.01
diagnostics_stride = 5
";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn params_incompressible_reference_values() {
    let o = kp(&["params", "--mu", "1", "--landau-a", "0", "--landau-d", "0", "--nu0", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("beta3 = 1.5"), "{s}");
    assert!(s.contains("branch = plus"), "{s}");
    assert!(s.contains("equation = cubic"), "{s}");
    assert!(stderr(&o).contains("epsilon"), "default epsilon warning expected");
}

#[test]
fn params_compressible_prints_speeds() {
    let o = kp(&[
        "params", "--lambda", "2", "--mu", "1", "--alpha1", "-2", "--alpha2", "1", "--gamma1", "0.5", "--gamma2",
        "0.2", "--nu0", "0.5", "--epsilon", "0.05",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("c_l = 2"), "{s}");
    assert!(s.contains("c_t = 1"), "{s}");
    assert!(s.contains("equation = quadratic"), "{s}");
    assert!(stderr(&o).is_empty());
}

#[test]
fn params_missing_constants_is_usage_error() {
    let o = kp(&["params", "--mu", "1", "--landau-a", "0", "--nu0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("landau-d"), "{}", stderr(&o));
}

#[test]
fn soliton_speed_and_samples() {
    let o = kp(&["soliton", "--equation", "quad", "--kappa", "1", "--theta", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "speed 4");

    let o = kp(&["soliton", "--equation", "cubic", "--kappa", "1", "--theta", "0", "--t", "0", "--samples", "5"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "speed 1");
    assert_eq!(lines.len(), 6);
    // middle sample is the peak at x = 0
    let peak: f64 = lines[3].split_whitespace().nth(1).unwrap().parse().unwrap();
    assert_eq!(peak, 1.0);
}

#[test]
fn unknown_subcommand_and_bad_values_are_usage_errors() {
    assert_eq!(kp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kp(&["soliton", "--equation", "quartic", "--kappa", "1"]).status.code(), Some(2));
    assert_eq!(kp(&["soliton", "--equation", "quad", "--kappa", "-1"]).status.code(), Some(2));
    assert_eq!(kp(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_config_reports_line_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", &SMALL.replace("dt = 1e-3", "dt = -1"));
    let o = kp(&["solve", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 13"), "{}", stderr(&o));
}

#[test]
fn solve_writes_snapshots_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SMALL);
    let out = dir.path().join("out");
    let o = kp(&["solve", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut snaps: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv") && p.file_name().unwrap() != "diagnostics.csv")
        .collect();
    snaps.sort();
    assert_eq!(snaps.len(), 3);
    let times: Vec<f64> = snaps.iter().map(|p| read_snapshot(p).unwrap().sim_time).collect();
    assert_eq!(times, vec![0.0, 0.005, 0.01]);
    let diag = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().count(), 4);
}

#[test]
fn blow_up_exits_3_and_keeps_last_finite_state() {
    let dir = tempfile::tempdir().unwrap();
    // a huge amplitude under a large step drives the explicit nonlinear stage to overflow
    let text = SMALL.replace("dt = 1e-3", "dt = 0.5").replace("t_end = 0.01", "t_end = 100").replace(
        "snapshot_times = 0, 0.005, 0.01",
        "snapshot_times = 0",
    );
    let cfg = write(dir.path(), "blow.cfg", &text);
    let out = dir.path().join("out");
    let o = kp(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}\n{}", stdout(&o), stderr(&o));
    assert!(stderr(&o).contains("instability"));
    let last = read_snapshot(&out.join("quadratic-plus_last_finite.kpsnap")).unwrap();
    assert!(last.field.is_finite());
}

#[test]
fn shock_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let n = 128;
    let mut text = String::from("# period 2pi\n");
    for i in 0..n {
        text += &format!("{}\n", (2.0 * std::f64::consts::PI * i as f64 / n as f64).sin());
    }
    let p = write(dir.path(), "sin.txt", &text);
    let o = kp(&["shock", "--equation", "quad", "--coeff", "1", "--profile", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let chi: f64 = stdout(&o).trim().strip_prefix("shock distance ").unwrap().parse().unwrap();
    assert!((chi - 1.0 / 3.0).abs() < 1e-12, "{chi}");

    let flat = write(dir.path(), "flat.txt", &"1\n".repeat(16));
    let o = kp(&["shock", "--equation", "cubic", "--coeff", "2", "--profile", &flat]);
    assert_eq!(stdout(&o).trim(), "no shock");

    let o = kp(&["shock", "--equation", "quad", "--coeff", "0", "--profile", &p]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_fast_prints_every_criterion() {
    let o = kp(&["validate", "--fast"]);
    let s = stdout(&o);
    for id in [
        "quadratic-soliton",
        "cubic-soliton",
        "soliton-speeds",
        "boussinesq-residual",
        "rk4-order",
        "conservation",
        "radial-experiment",
        "transforms",
        "coefficients",
        "oracle-equivalence",
    ] {
        assert!(s.contains(id), "{id} missing:\n{s}");
    }
    let failed = s.lines().any(|l| l.starts_with("FAIL"));
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
}

#[test]
fn validate_rejects_missing_snapshot_dir() {
    let o = kp(&["validate", "--fast", "--snapshots", "/nonexistent/kp"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for name in ["soliton_quad.cfg", "soliton_cubic.cfg", "radial_quad.cfg", "radial_cubic.cfg"] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        let cfg = kp_elastic::io::config::parse_config(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(cfg.solver_config().validate().is_ok(), "{name}");
    }
}

#[test]
fn validate_fast_consumes_soliton_snapshots() {
    use kp_elastic::analytic::{line_soliton, SolitonParams};
    use kp_elastic::io::snapshot::{write_snapshot, EquationTag, Snapshot, SnapshotFormat};
    use kp_elastic::material::{EquationKind, SignBranch};
    use kp_elastic::spectral::Field2D;
    use kp_elastic::validation::soliton_config;

    // exact fields stand in for a solver run at the soliton setup
    let dir = tempfile::tempdir().unwrap();
    let kind = EquationKind::Quadratic;
    let grid = soliton_config(kind).grid;
    let p = SolitonParams::new(kind, SignBranch::Plus, 1.0, 0.0, 0.0).unwrap();
    for t in [0.0, 2.0] {
        let s = Snapshot {
            field: Field2D::from_fn(&grid, |x, y| line_soliton(&p, t, x, y)),
            sim_time: t,
            equation: EquationTag { kind, branch: SignBranch::Plus },
            config_digest: "0".repeat(64),
        };
        write_snapshot(&s, &dir.path().join(format!("q{t}.kpsnap")), SnapshotFormat::F64Le).unwrap();
    }
    let o = kp(&["validate", "--fast", "--snapshots", dir.path().to_str().unwrap()]);
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("PASS  quadratic-soliton")), "{s}");
    assert!(s.lines().any(|l| l.starts_with("SKIP  cubic-soliton")), "{s}");
    assert!(!s.lines().any(|l| l.starts_with("SKIP  conservation")), "{s}");
}
