//! Command-line front end of the `kp` binary.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or input error,
//! 3 numerical instability.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analytic::{line_soliton, shock_distance, SolitonParams};
use crate::io::config::{parse_config, parse_number};
use crate::io::snapshot::{write_snapshot, Snapshot, SnapshotFormat};
use crate::material::{
    beta3_landau, beta_quadratic, wave_speeds, Dispersion, EquationKind, EquationSpec, MaterialCompressible,
    MaterialIncompressible, SignBranch, TaylorConstants,
};
use crate::spectral::{run, Peak, RunOutput, SolverError};
use crate::transforms::{canonical_field_to_physical_velocity, scale_factors, PhysicalScaling, Regime};
use crate::validation::{run_all, Status, ValidateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INSTABILITY: i32 = 3;

/// Small parameter used by `params` when `--epsilon` is not given.
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(name = "kp", version, about = "Canonical quadratic and cubic KP equations for elastic solids")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a configuration file and write snapshots.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Snapshot format (overrides `format`).
        #[arg(long)]
        format: Option<SnapshotFormat>,
    },
    /// Wave speeds, nonlinearity coefficient, branch and scale factors of a material.
    Params(ParamsArgs),
    /// Speed and samples of a line soliton.
    Soliton {
        #[arg(long, value_parser = parse_kind)]
        equation: EquationKind,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Print samples at this canonical time.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, default_value = "plus")]
        branch: SignBranch,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value = "-4pi", allow_hyphen_values = true)]
        x_min: String,
        #[arg(long, default_value = "4pi", allow_hyphen_values = true)]
        x_max: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Shock-formation distance of the dispersionless reduction.
    Shock {
        #[arg(long, value_parser = parse_kind)]
        equation: EquationKind,
        /// `beta` (quadratic) or `beta3` (cubic).
        #[arg(long, allow_hyphen_values = true)]
        coeff: f64,
        /// One sample per line over one period; `# period <T>` sets the period (default 2pi).
        #[arg(long)]
        profile: PathBuf,
        /// Period of the profile (overrides the file header).
        #[arg(long)]
        period: Option<String>,
    },
    /// Run the reference checks and print a pass/fail table.
    Validate {
        /// Skip the long integrations; read soliton snapshots from `--snapshots`.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ParamsArgs {
    /// Inferred from the constants given when omitted.
    #[arg(long)]
    regime: Option<RegimeArg>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    rho0: f64,
    #[arg(long, allow_hyphen_values = true)]
    alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha2: Option<f64>,
    /// Defaults to `mu`.
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma2: Option<f64>,
    #[arg(long = "landau-a", allow_hyphen_values = true)]
    landau_a: Option<f64>,
    #[arg(long = "landau-d", allow_hyphen_values = true)]
    landau_d: Option<f64>,
    #[arg(long)]
    nu0: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Characteristic length L (m).
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum RegimeArg {
    Compressible,
    Incompressible,
}

fn parse_kind(s: &str) -> Result<EquationKind, String> {
    s.parse()
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Err(f) = configure_threads() {
        let _ = writeln!(err, "error: {}", f.message);
        return f.code;
    }
    let result = match cli.command {
        Command::Solve { config, out: dir, format } => solve(&config, dir, format, out, err),
        Command::Params(p) => params(&p, out, err),
        Command::Soliton { equation, kappa, theta, t, branch, x0, y, x_min, x_max, samples } => {
            soliton(equation, kappa, theta, t, branch, x0, y, &x_min, &x_max, samples, out)
        }
        Command::Shock { equation, coeff, profile, period } => shock(equation, coeff, &profile, period.as_deref(), out),
        Command::Validate { fast, snapshots } => validate(fast, snapshots, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Applies `KP_THREADS` to the global thread pool.
fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("KP_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("KP_THREADS must be a positive integer, got `{value}`")))?;
    // a pool may already exist when called twice in one process; the first setting stays
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn snapshot_path(dir: &Path, index: usize, s: &Snapshot, format: SnapshotFormat) -> PathBuf {
    dir.join(format!("{}_{index:03}_t{:.6}.{}", s.equation, s.sim_time, format.extension()))
}

fn write_diagnostics(path: &Path, out: &RunOutput) -> std::io::Result<()> {
    let mut text = String::from("step,time,mean,l2_norm,min,max,peak_x,peak_y,peak_value\n");
    for d in &out.diagnostics {
        let g = &d.diagnostics;
        let peak = match g.peak {
            Peak::At { x, y, value } => format!("{x:e},{y:e},{value:e}"),
            Peak::Flat => ",,".to_string(),
        };
        text += &format!("{},{:e},{:e},{:e},{:e},{:e},{peak}\n", d.step, d.time, g.mean, g.l2_norm, g.min, g.max);
    }
    fs::write(path, text)
}

fn solve(
    config: &Path,
    dir: Option<PathBuf>,
    format: Option<SnapshotFormat>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let text = fs::read_to_string(config).map_err(|e| io_failure(config, e))?;
    let cfg = parse_config(&text).map_err(|e| usage(format!("{}:\n{e}", config.display())))?;
    let dir = dir.unwrap_or_else(|| cfg.output_dir.clone());
    let format = format.unwrap_or(cfg.format);
    fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
    let solver = cfg.solver_config();
    let _ = writeln!(
        out,
        "solving {} ({}) on {}x{}, dt = {}, {} steps",
        solver.equation_tag(),
        cfg.initial,
        cfg.grid.nx(),
        cfg.grid.ny(),
        cfg.dt,
        solver.step_count()
    );
    match run(&solver, &cfg.initial_field()) {
        Ok(result) => {
            for (k, s) in result.snapshots.iter().enumerate() {
                let path = snapshot_path(&dir, k, s, format);
                write_snapshot(s, &path, format).map_err(|e| io_failure(&path, e))?;
                let _ = writeln!(out, "wrote {} (t = {})", path.display(), s.sim_time);
            }
            if !result.diagnostics.is_empty() {
                let path = dir.join("diagnostics.csv");
                write_diagnostics(&path, &result).map_err(|e| io_failure(&path, e))?;
            }
            Ok(EXIT_OK)
        }
        Err(SolverError::Instability { time, step, last_finite }) => {
            let path = dir.join(format!("{}_last_finite.{}", last_finite.equation, format.extension()));
            let saved = write_snapshot(&last_finite, &path, format).is_ok();
            let _ = writeln!(err, "error: numerical instability at t = {time} (step {step})");
            if saved {
                let _ = writeln!(err, "last finite state (t = {}) written to {}", last_finite.sim_time, path.display());
            }
            Ok(EXIT_INSTABILITY)
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn params(p: &ParamsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let physical = [p.nu, p.length].iter().any(Option::is_some);
    let epsilon = match p.epsilon {
        Some(e) => e,
        None => {
            let _ = writeln!(
                err,
                "warning: --epsilon not given, using {DEFAULT_EPSILON}; the asymptotic model is only valid for small epsilon chosen for the problem at hand"
            );
            DEFAULT_EPSILON
        }
    };
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(usage(format!("--epsilon must lie in (0, 1), got {epsilon}")));
    }
    let dispersion = match (p.nu0, physical) {
        (Some(_), true) => return Err(usage("give either --nu0 or --nu with --length, not both")),
        (Some(nu0), false) => Dispersion::Dimensionless(nu0),
        (None, true) => Dispersion::Physical {
            nu: p.nu.ok_or_else(|| usage("--nu is required with --length"))?,
            length: p.length.ok_or_else(|| usage("--length is required with --nu"))?,
            epsilon,
        },
        (None, false) => return Err(usage("give --nu0, or --nu and --length")),
    };
    let regime = match p.regime {
        Some(RegimeArg::Compressible) => Regime::Compressible,
        Some(RegimeArg::Incompressible) => Regime::Incompressible,
        None if p.landau_a.is_some() || p.landau_d.is_some() => Regime::Incompressible,
        None if p.lambda.is_some() => Regime::Compressible,
        None => return Err(usage("cannot infer the regime; give --regime or the material constants")),
    };
    let length = p.length.unwrap_or(1.0);
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required for this regime")));
    let material = |e: crate::material::MaterialError| usage(e.to_string());
    match regime {
        Regime::Compressible => {
            let taylor = TaylorConstants {
                alpha1: need(p.alpha1, "alpha1")?,
                alpha2: need(p.alpha2, "alpha2")?,
                gamma0: p.gamma0.unwrap_or(p.mu),
                gamma1: need(p.gamma1, "gamma1")?,
                gamma2: need(p.gamma2, "gamma2")?,
            };
            let m = MaterialCompressible::new(need(p.lambda, "lambda")?, p.mu, p.rho0, taylor, dispersion)
                .map_err(material)?;
            let speeds = wave_speeds(&m).map_err(material)?;
            let beta = beta_quadratic(&m).map_err(material)?;
            let _ = writeln!(out, "regime = compressible");
            let _ = writeln!(out, "c_l = {}", speeds.longitudinal);
            let _ = writeln!(out, "c_t = {}", speeds.transverse);
            let _ = writeln!(out, "speed_identity_residual = {:e}", speeds.identity_residual);
            let _ = writeln!(out, "beta = {beta}");
            let spec = EquationSpec::from_compressible(&m).map_err(material)?;
            let ps = PhysicalScaling { epsilon, length, speed: speeds.longitudinal, regime };
            print_spec(&spec, &ps, out);
        }
        Regime::Incompressible => {
            let m = MaterialIncompressible::new(
                p.mu,
                p.rho0,
                need(p.landau_a, "landau-a")?,
                need(p.landau_d, "landau-d")?,
                dispersion,
            )
            .map_err(material)?;
            let _ = writeln!(out, "regime = incompressible");
            let _ = writeln!(out, "c_t = {}", m.shear_speed());
            let _ = writeln!(out, "beta3 = {}", beta3_landau(&m));
            let spec = EquationSpec::from_incompressible(&m).map_err(material)?;
            let ps = PhysicalScaling { epsilon, length, speed: m.shear_speed(), regime };
            print_spec(&spec, &ps, out);
        }
    }
    Ok(EXIT_OK)
}

fn print_spec(spec: &EquationSpec, ps: &PhysicalScaling, out: &mut dyn Write) {
    let s = scale_factors(spec);
    let _ = writeln!(out, "equation = {}", spec.kind());
    let _ = writeln!(out, "branch = {}", spec.branch());
    let _ = writeln!(out, "nu0 = {}", spec.nu0());
    let _ = writeln!(out, "s_t = {}", s.s_t);
    let _ = writeln!(out, "s_x = {}", s.s_x);
    let _ = writeln!(out, "s_y = {}", s.s_y);
    let _ = writeln!(out, "epsilon = {}", ps.epsilon);
    let _ = writeln!(out, "velocity_per_unit_amplitude = {}", canonical_field_to_physical_velocity(1.0, ps));
}

#[allow(clippy::too_many_arguments)]
fn soliton(
    kind: EquationKind,
    kappa: f64,
    theta: f64,
    t: Option<f64>,
    branch: SignBranch,
    x0: f64,
    y: f64,
    x_min: &str,
    x_max: &str,
    samples: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = SolitonParams::new(kind, branch, kappa, theta, x0).map_err(|e| usage(e.to_string()))?;
    let _ = writeln!(out, "speed {}", p.speed());
    if let Some(t) = t {
        let a = parse_number(x_min).map_err(usage)?;
        let b = parse_number(x_max).map_err(usage)?;
        if !(b > a) || samples < 2 {
            return Err(usage("need x-max > x-min and at least 2 samples"));
        }
        let dx = (b - a) / (samples - 1) as f64;
        for i in 0..samples {
            let x = a + i as f64 * dx;
            let _ = writeln!(out, "{x:.17e} {:.17e}", line_soliton(&p, t, x, y));
        }
    }
    Ok(EXIT_OK)
}

/// Profile samples, one per line; `#` starts a comment and `# period <T>`
/// sets the period.
fn read_profile(path: &Path) -> Result<(Vec<f64>, Option<f64>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut values = Vec::new();
    let mut period = None;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(p) = comment.trim().strip_prefix("period") {
                period = Some(parse_number(p).map_err(|m| usage(format!("{}:{}: {m}", path.display(), k + 1)))?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        values.push(parse_number(line).map_err(|m| usage(format!("{}:{}: {m}", path.display(), k + 1)))?);
    }
    Ok((values, period))
}

fn shock(kind: EquationKind, coeff: f64, profile: &Path, period: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    let (values, file_period) = read_profile(profile)?;
    let period = match period {
        Some(p) => parse_number(p).map_err(usage)?,
        None => file_period.unwrap_or(2.0 * std::f64::consts::PI),
    };
    match shock_distance(&values, period, kind, coeff).map_err(|e| usage(e.to_string()))? {
        Some(chi) => {
            let _ = writeln!(out, "shock distance {chi}");
        }
        None => {
            let _ = writeln!(out, "no shock");
        }
    }
    Ok(EXIT_OK)
}

fn validate(fast: bool, snapshots: Option<PathBuf>, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(dir) = &snapshots {
        if !dir.is_dir() {
            return Err(usage(format!("{} is not a directory", dir.display())));
        }
    }
    let reports = run_all(&ValidateOptions { fast, snapshots });
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = reports.iter().filter(|r| r.status == Status::Skip).count();
    let _ = writeln!(
        out,
        "{} passed, {failed} failed, {skipped} skipped",
        reports.len() - failed - skipped
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VALIDATION })
}
