//! Integrating-factor RK4 time stepping.
//!
//! Writing the equation as `Û_t = -L Û + N(Û)`, the substitution
//! `W = exp(t L) Û` removes the stiff dispersive part and classical RK4 is
//! applied to `W`. Expressed back in `Û` with `E = exp(-L dt/2)`:
//!
//! ```text
//! a = dt N(v)
//! b = dt N(E (v + a/2))
//! c = dt N(E v + b/2)
//! d = dt N(E² v + E c)
//! v' = E² v + (E² a + 2 E (b + c) + d) / 6
//! ```

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::diagnostics::{diagnostics, Diagnostics};
use super::operators::{linear_symbol, Dealias, LinearSymbol, NonlinearOp, ZeroModePolicy, DEFAULT_EPS_REG};
use super::{Fft2, Field2D, SolverError, SpectralGrid, Spectrum};
use crate::io::snapshot::{EquationTag, Snapshot};
use crate::material::EquationSpec;

/// Stage factors above this magnitude are saturated to zero.
pub const FACTOR_SATURATION: f64 = 1e300;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub spec: EquationSpec,
    pub grid: SpectralGrid,
    pub dt: f64,
    pub t_end: f64,
    pub eps_reg: f64,
    pub zero_mode: ZeroModePolicy,
    pub dealias: Dealias,
    /// Requested output times, sorted, within `[0, t_end]`.
    pub snapshot_times: Vec<f64>,
    /// Record diagnostics every this many steps (0 disables the series).
    pub diagnostics_stride: usize,
    /// Digest stored in snapshots; derived from the solver settings when absent.
    pub digest: Option<String>,
}

impl SolverConfig {
    pub fn new(spec: EquationSpec, grid: SpectralGrid, dt: f64, t_end: f64) -> Self {
        Self {
            spec,
            grid,
            dt,
            t_end,
            eps_reg: DEFAULT_EPS_REG,
            zero_mode: ZeroModePolicy::default(),
            dealias: Dealias::default(),
            snapshot_times: vec![0.0, t_end],
            diagnostics_stride: 100,
            digest: None,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(SolverError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(SolverError::Config(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if !(self.eps_reg.is_finite() && self.eps_reg > 0.0) {
            return Err(SolverError::Config(format!("eps_reg must be positive, got {}", self.eps_reg)));
        }
        if self.snapshot_times.windows(2).any(|w| w[0] > w[1]) {
            return Err(SolverError::Config("snapshot times must be sorted".into()));
        }
        if self.snapshot_times.iter().any(|&t| !(0.0..=self.t_end).contains(&t)) {
            return Err(SolverError::Config("snapshot times must lie within [0, t_end]".into()));
        }
        Ok(())
    }

    /// `⌈t_end/dt⌉`, ignoring a rounding excess below 1e-9 of a step.
    pub fn step_count(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    pub fn equation_tag(&self) -> EquationTag {
        EquationTag { kind: self.spec.kind(), branch: self.spec.branch() }
    }

    pub fn digest(&self) -> String {
        self.digest.clone().unwrap_or_else(|| {
            let d = self.grid.domain();
            let text = format!(
                "equation = {}\nnx = {}\nny = {}\ndomain = {:e} {:e} {:e} {:e}\ndt = {:e}\nt_end = {:e}\neps_reg = {:e}\nzero_mode = {}\ndealias = {}\n",
                self.equation_tag(),
                self.grid.nx(),
                self.grid.ny(),
                d.x_min,
                d.x_max,
                d.y_min,
                d.y_max,
                self.dt,
                self.t_end,
                self.eps_reg,
                self.zero_mode.as_str(),
                self.dealias.as_str(),
            );
            sha256_hex(&text)
        })
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// `exp(-L dt/2)` and `exp(-L dt)`.
#[derive(Debug, Clone)]
pub struct StageFactors {
    pub half: Vec<Complex64>,
    pub full: Vec<Complex64>,
}

impl StageFactors {
    pub fn new(symbol: &LinearSymbol, dt: f64) -> Self {
        let factor = |l: Complex64, h: f64| {
            let e = (-l * h).exp();
            if e.re.is_finite() && e.im.is_finite() && e.norm() <= FACTOR_SATURATION {
                e
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let data = symbol.values().data();
        Self {
            half: data.iter().map(|&l| factor(l, 0.5 * dt)).collect(),
            full: data.iter().map(|&l| factor(l, dt)).collect(),
        }
    }
}

/// Scratch arrays for [`step_ifrk4`].
#[derive(Debug, Clone)]
pub struct Rk4Workspace {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
    d: Vec<Complex64>,
    stage: Vec<Complex64>,
}

impl Rk4Workspace {
    pub fn new(len: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); len];
        Self { a: z.clone(), b: z.clone(), c: z.clone(), d: z.clone(), stage: z }
    }
}

/// One integrating-factor RK4 step from `state` into `out`.
///
/// `nonlinear(v, n)` must write `N(v)` into `n`.
pub fn step_ifrk4(
    state: &[Complex64],
    out: &mut [Complex64],
    dt: f64,
    factors: &StageFactors,
    ws: &mut Rk4Workspace,
    mut nonlinear: impl FnMut(&[Complex64], &mut [Complex64]),
) {
    let (e, e2) = (&factors.half, &factors.full);
    let Rk4Workspace { a, b, c, d, stage } = ws;

    nonlinear(state, a);
    a.iter_mut().for_each(|v| *v *= dt);

    for k in 0..state.len() {
        stage[k] = e[k] * (state[k] + 0.5 * a[k]);
    }
    nonlinear(stage, b);
    b.iter_mut().for_each(|v| *v *= dt);

    for k in 0..state.len() {
        stage[k] = e[k] * state[k] + 0.5 * b[k];
    }
    nonlinear(stage, c);
    c.iter_mut().for_each(|v| *v *= dt);

    for k in 0..state.len() {
        stage[k] = e2[k] * state[k] + e[k] * c[k];
    }
    nonlinear(stage, d);
    d.iter_mut().for_each(|v| *v *= dt);

    for k in 0..state.len() {
        out[k] = e2[k] * state[k] + (e2[k] * a[k] + 2.0 * e[k] * (b[k] + c[k]) + d[k]) / 6.0;
    }
}

/// Solver state for one configuration, with all per-run constants precomputed.
#[derive(Debug)]
pub struct Stepper {
    grid: SpectralGrid,
    dt: f64,
    project: bool,
    factors: StageFactors,
    nonlinear: NonlinearOp,
    fft: Fft2,
    state: Spectrum,
    next: Spectrum,
    stage_in: Spectrum,
    stage_out: Spectrum,
    phys: Vec<f64>,
    ws: Rk4Workspace,
}

impl Stepper {
    pub fn new(config: &SolverConfig) -> Result<Self, SolverError> {
        config.validate()?;
        let grid = config.grid.clone();
        let symbol = linear_symbol(&grid, config.eps_reg, config.zero_mode);
        let n = grid.nxh() * grid.ny();
        Ok(Self {
            dt: config.dt,
            project: config.zero_mode == ZeroModePolicy::Project,
            factors: StageFactors::new(&symbol, config.dt),
            nonlinear: NonlinearOp::new(&config.spec, &grid, config.dealias),
            fft: Fft2::for_grid(&grid),
            state: Spectrum::for_grid(&grid),
            next: Spectrum::for_grid(&grid),
            stage_in: Spectrum::for_grid(&grid),
            stage_out: Spectrum::for_grid(&grid),
            phys: vec![0.0; grid.len()],
            ws: Rk4Workspace::new(n),
            grid,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn set_field(&mut self, field: &Field2D) -> Result<(), SolverError> {
        if !field.matches(&self.grid) {
            return Err(SolverError::Config("initial field does not match the grid".into()));
        }
        if !field.is_finite() {
            return Err(SolverError::NonFinite("initial field".into()));
        }
        self.fft.forward(field.values(), &mut self.state);
        self.finish(true);
        Ok(())
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.state
    }

    pub fn field(&mut self) -> Field2D {
        let mut f = Field2D::zeros(&self.grid);
        self.fft.inverse(&self.state, f.values_mut());
        f
    }

    /// Projection and conjugate symmetrisation of `state` (or `next`).
    fn finish(&mut self, on_state: bool) {
        let target = if on_state { &mut self.state } else { &mut self.next };
        if self.project {
            let ny = target.ny();
            target.data_mut()[1..ny].iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        }
        target.symmetrize();
    }

    /// Advances by one step; on a non-finite result the state is left unchanged.
    pub fn step(&mut self) -> Result<(), SolverError> {
        let Self { nonlinear, fft, stage_in, stage_out, phys, project, .. } = self;
        let ny = self.grid.ny();
        let project = *project;
        let mut eval = |v: &[Complex64], out: &mut [Complex64]| {
            stage_in.data_mut().copy_from_slice(v);
            if project {
                stage_in.data_mut()[1..ny].iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            }
            nonlinear.apply(fft, stage_in, phys, stage_out);
            out.copy_from_slice(stage_out.data());
        };
        step_ifrk4(self.state.data(), self.next.data_mut(), self.dt, &self.factors, &mut self.ws, &mut eval);
        self.finish(false);
        if !self.next.is_finite() {
            return Err(SolverError::NonFinite("state after step".into()));
        }
        std::mem::swap(&mut self.state, &mut self.next);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSample {
    pub step: usize,
    pub time: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<DiagnosticsSample>,
    pub steps: usize,
}

/// Integrates from `t = 0` over `⌈t_end/dt⌉` steps.
///
/// Each requested snapshot time is served by the nearest completed step and
/// the actual step time is recorded.
pub fn run(config: &SolverConfig, initial: &Field2D) -> Result<RunOutput, SolverError> {
    let mut stepper = Stepper::new(config)?;
    stepper.set_field(initial)?;
    let steps = config.step_count();
    let tag = config.equation_tag();
    let digest = config.digest();

    let mut wanted: Vec<usize> = config
        .snapshot_times
        .iter()
        .map(|t| ((t / config.dt).round() as usize).min(steps))
        .collect();
    wanted.dedup();
    let mut wanted = wanted.into_iter().peekable();

    let mut out = RunOutput { snapshots: Vec::new(), diagnostics: Vec::new(), steps };
    let snapshot = |field: Field2D, n: usize| Snapshot {
        field,
        sim_time: n as f64 * config.dt,
        equation: tag,
        config_digest: digest.clone(),
    };

    let mut last = snapshot(initial.clone(), 0);
    for n in 0..=steps {
        if n > 0 {
            if let Err(SolverError::NonFinite(_)) = stepper.step() {
                return Err(SolverError::Instability {
                    time: n as f64 * config.dt,
                    step: n,
                    last_finite: Box::new(last),
                });
            }
        }
        let want_snap = wanted.peek() == Some(&n);
        let want_diag = config.diagnostics_stride > 0 && (n % config.diagnostics_stride == 0 || n == steps);
        if want_snap || want_diag {
            let field = if n == 0 { initial.clone() } else { stepper.field() };
            if want_diag {
                out.diagnostics.push(DiagnosticsSample {
                    step: n,
                    time: n as f64 * config.dt,
                    diagnostics: diagnostics(&field),
                });
            }
            last = snapshot(field, n);
            if want_snap {
                wanted.next();
                out.snapshots.push(last.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{EquationKind, SignBranch};
    use crate::spectral::{make_grid, Domain};
    use std::f64::consts::PI;

    fn config(kind: EquationKind, n: usize, half: f64, dt: f64, t_end: f64) -> SolverConfig {
        let grid = make_grid(n, n, Domain::centered(half, half)).unwrap();
        SolverConfig::new(EquationSpec::canonical(kind, SignBranch::Plus), grid, dt, t_end)
    }

    #[test]
    fn step_count_rounds_up() {
        let c = config(EquationKind::Quadratic, 16, PI, 1e-4, 2.0);
        assert_eq!(c.step_count(), 20_000);
        let c = config(EquationKind::Quadratic, 16, PI, 0.3, 1.0);
        assert_eq!(c.step_count(), 4);
        let c = config(EquationKind::Quadratic, 16, PI, 0.1, 0.0);
        assert_eq!(c.step_count(), 0);
    }

    #[test]
    fn zero_state_is_fixed() {
        let c = config(EquationKind::Cubic, 32, PI, 1e-3, 0.01);
        let mut s = Stepper::new(&c).unwrap();
        s.set_field(&Field2D::zeros(&c.grid)).unwrap();
        for _ in 0..5 {
            s.step().unwrap();
        }
        assert!(s.spectrum().data().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn linear_part_is_exact() {
        let c = config(EquationKind::Quadratic, 32, PI, 1e-3, 1.0);
        let symbol = linear_symbol(&c.grid, c.eps_reg, c.zero_mode);
        let factors = StageFactors::new(&symbol, c.dt);
        let n = c.grid.nxh() * c.grid.ny();
        let state: Vec<Complex64> = (0..n).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut ws = Rk4Workspace::new(n);
        step_ifrk4(&state, &mut out, c.dt, &factors, &mut ws, |_, n| n.fill(Complex64::new(0.0, 0.0)));
        for k in 0..n {
            let expected = (-symbol.values().data()[k] * c.dt).exp() * state[k];
            assert!((out[k] - expected).norm() <= 1e-15 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn regularized_factors_saturate_instead_of_overflowing() {
        let c = config(EquationKind::Quadratic, 16, PI, 1e-4, 1.0);
        let symbol = linear_symbol(&c.grid, 1e-16, ZeroModePolicy::Regularize);
        let f = StageFactors::new(&symbol, c.dt);
        assert!(f.full.iter().chain(&f.half).all(|v| v.re.is_finite() && v.im.is_finite()));
        // kx = 0, ky != 0
        assert_eq!(f.full[1], Complex64::new(0.0, 0.0));
        assert_eq!(f.full[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn soliton_step_obeys_transport_bound() {
        let c = config(EquationKind::Quadratic, 256, 4.0 * PI, 1e-4, 1e-4);
        let u0 = Field2D::from_fn(&c.grid, |x, _| 2.0 / x.cosh().powi(2));
        let mut s = Stepper::new(&c).unwrap();
        s.set_field(&u0).unwrap();
        s.step().unwrap();
        let u1 = s.field();
        let change = u0.values().iter().zip(u1.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        // max |d/dx 2 sech²(x)| = 8/(3√3)
        let bound = 4.0 * c.dt * 8.0 / (3.0 * 3f64.sqrt());
        assert!(change > 0.0 && change <= bound * 1.01, "change {change} bound {bound}");
    }

    #[test]
    fn run_with_zero_end_time_returns_initial() {
        let c = config(EquationKind::Cubic, 32, PI, 1e-3, 0.0);
        let u0 = Field2D::from_fn(&c.grid, |x, y| (x.cos() + 0.1 * y.sin()) * 0.5);
        let out = run(&c, &u0).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.snapshots[0].field, u0);
        assert_eq!(out.snapshots[0].sim_time, 0.0);
    }

    #[test]
    fn snapshots_snap_to_nearest_step() {
        let mut c = config(EquationKind::Cubic, 16, PI, 0.003, 0.01);
        c.snapshot_times = vec![0.0, 0.004, 0.005, 0.01];
        let u0 = Field2D::from_fn(&c.grid, |x, _| 0.1 * x.cos());
        let out = run(&c, &u0).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|s| s.sim_time).collect();
        assert_eq!(out.steps, 4);
        assert_eq!(times, vec![0.0, 0.003, 2.0 * 0.003, 3.0 * 0.003]);
        assert_eq!(out.snapshots[0].config_digest, c.digest());
    }

    #[test]
    fn blow_up_reports_last_finite_snapshot() {
        // a huge amplitude with a large step overflows within a few steps
        let mut c = config(EquationKind::Cubic, 16, PI, 0.5, 50.0);
        c.diagnostics_stride = 1;
        let u0 = Field2D::from_fn(&c.grid, |x, _| 1e3 * x.cos());
        match run(&c, &u0) {
            Err(SolverError::Instability { time, step, last_finite }) => {
                assert!(step >= 1);
                assert_eq!(time, step as f64 * 0.5);
                assert!(last_finite.field.is_finite());
                assert_eq!(last_finite.sim_time, (step - 1) as f64 * 0.5);
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn dc_mode_is_bit_invariant() {
        for kind in [EquationKind::Quadratic, EquationKind::Cubic] {
            let c = config(kind, 64, 2.0 * PI, 1e-3, 0.05);
            let u0 = Field2D::from_fn(&c.grid, |x, y| 0.8 / (x.cosh() * (0.5 * y).cosh()) + 0.1 * (x + y).sin());
            let mut s = Stepper::new(&c).unwrap();
            s.set_field(&u0).unwrap();
            let dc = s.spectrum().get(0, 0);
            for _ in 0..50 {
                s.step().unwrap();
                assert_eq!(s.spectrum().get(0, 0).re.to_bits(), dc.re.to_bits());
                assert_eq!(s.spectrum().get(0, 0).im, 0.0);
            }
        }
    }

    #[test]
    fn spectrum_stays_hermitian_and_projected() {
        let c = config(EquationKind::Cubic, 32, PI, 1e-3, 0.02);
        let u0 = Field2D::from_fn(&c.grid, |x, y| (x + 0.5 * y.cos()).sin() * 0.7);
        let mut s = Stepper::new(&c).unwrap();
        s.set_field(&u0).unwrap();
        for _ in 0..20 {
            s.step().unwrap();
        }
        let spec = s.spectrum();
        let (ny, nxh) = (spec.ny(), spec.nxh());
        let scale = spec.data().iter().fold(0.0f64, |m, v| m.max(v.norm()));
        for ix in [0, nxh - 1] {
            for iy in 0..ny {
                let mirror = spec.get(ix, (ny - iy) % ny).conj();
                assert!((spec.get(ix, iy) - mirror).norm() <= 1e-13 * scale);
            }
        }
        for iy in 1..ny {
            assert_eq!(spec.get(0, iy), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn even_data_stays_even_in_y() {
        let c = config(EquationKind::Quadratic, 64, 2.0 * PI, 1e-3, 0.05);
        let u0 = Field2D::from_fn(&c.grid, |x, y| x.sin() / (1.0 + y * y) + 0.3 * (2.0 * x).cos() * y.cos());
        let mut s = Stepper::new(&c).unwrap();
        s.set_field(&u0).unwrap();
        for _ in 0..50 {
            s.step().unwrap();
        }
        let f = s.field();
        let ny = f.ny();
        for j in 0..ny {
            for i in 0..f.nx() {
                assert!((f.get(i, j) - f.get(i, (ny - j) % ny)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn regularize_policy_matches_projection() {
        let mut c = config(EquationKind::Quadratic, 32, PI, 1e-3, 0.02);
        let u0 = Field2D::from_fn(&c.grid, |x, y| (x.sin() + 0.2 * (x - y).cos()) * 0.5);
        let projected = run(&c, &u0).unwrap();
        c.zero_mode = ZeroModePolicy::Regularize;
        let regular = run(&c, &u0).unwrap();
        let (a, b) = (&projected.snapshots[1].field, &regular.snapshots[1].field);
        assert!(b.is_finite());
        let diff = a.values().iter().zip(b.values()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = config(EquationKind::Cubic, 16, PI, -1.0, 1.0);
        assert!(c.validate().is_err());
        c.dt = 0.1;
        c.snapshot_times = vec![0.5, 0.2];
        assert!(c.validate().is_err());
        c.snapshot_times = vec![2.0];
        assert!(c.validate().is_err());
        c.snapshot_times = vec![];
        c.eps_reg = 0.0;
        assert!(c.validate().is_err());
    }
}
