//! Closed-form line solitons, initial data and one-dimensional diagnostics.

use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::material::{EquationKind, SignBranch};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate equation: {0}")]
    Degenerate(String),
}

/// `4κ² + θ²` for the quadratic equation, `κ² + θ²` for the cubic one.
pub fn soliton_speed(kind: EquationKind, kappa: f64, theta: f64) -> f64 {
    match kind {
        EquationKind::Quadratic => 4.0 * kappa * kappa + theta * theta,
        EquationKind::Cubic => kappa * kappa + theta * theta,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    kind: EquationKind,
    branch: SignBranch,
    kappa: f64,
    theta: f64,
    x0: f64,
    speed: f64,
}

impl SolitonParams {
    pub fn new(kind: EquationKind, branch: SignBranch, kappa: f64, theta: f64, x0: f64) -> Result<Self, AnalyticError> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(AnalyticError::Input(format!("kappa must be positive, got {kappa}")));
        }
        if !theta.is_finite() || !x0.is_finite() {
            return Err(AnalyticError::Input("theta and x0 must be finite".into()));
        }
        Ok(Self { kind, branch, kappa, theta, x0, speed: soliton_speed(kind, kappa, theta) })
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn branch(&self) -> SignBranch {
        self.branch
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Same soliton with a different phase offset.
    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }
}

fn sech(z: f64) -> f64 {
    // cosh overflows to inf for |z| > 710, giving the correct limit 0
    1.0 / z.cosh()
}

/// Line soliton at canonical time `t`.
///
/// Quadratic: `±2κ² sech²(κ(x + θy - υt + x₀))`; cubic: `±κ sech(…)`, with the
/// sign of the branch.
pub fn line_soliton(p: &SolitonParams, t: f64, x: f64, y: f64) -> f64 {
    let k = p.kappa;
    let phase = k * (x + p.theta * y - p.speed * t + p.x0);
    let s = p.branch.sign();
    match p.kind {
        EquationKind::Quadratic => s * 2.0 * k * k * sech(phase).powi(2),
        EquationKind::Cubic => s * k * sech(phase),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// `2 sech²(x)`.
    SolitonQuad,
    /// `sech(x)`.
    SolitonCubic,
    /// `-∂x sech²(r)`.
    RadialQuad,
    /// `-∂x sech(r)`.
    RadialCubic,
}

impl InitialCondition {
    pub const ALL: [InitialCondition; 4] = [Self::SolitonQuad, Self::SolitonCubic, Self::RadialQuad, Self::RadialCubic];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::SolitonQuad => "soliton_quad",
            Self::SolitonCubic => "soliton_cubic",
            Self::RadialQuad => "radial_quad",
            Self::RadialCubic => "radial_cubic",
        }
    }

    /// Equation the initial condition was designed for.
    pub fn kind(self) -> EquationKind {
        match self {
            Self::SolitonQuad | Self::RadialQuad => EquationKind::Quadratic,
            Self::SolitonCubic | Self::RadialCubic => EquationKind::Cubic,
        }
    }
}

impl FromStr for InitialCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown initial condition `{s}` (expected soliton_quad|soliton_cubic|radial_quad|radial_cubic)"))
    }
}

impl std::fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn initial_condition(ic: InitialCondition, x: f64, y: f64) -> f64 {
    let radial = |x: f64, y: f64, g: fn(f64) -> f64| {
        let r = x.hypot(y);
        if r < 1e-12 {
            0.0
        } else {
            g(r) * r.tanh() * x / r
        }
    };
    match ic {
        InitialCondition::SolitonQuad => 2.0 * sech(x).powi(2),
        InitialCondition::SolitonCubic => sech(x),
        InitialCondition::RadialQuad => radial(x, y, |r| 2.0 * sech(r).powi(2)),
        InitialCondition::RadialCubic => radial(x, y, sech),
    }
}

fn check_profile(profile: &[f64]) -> Result<(), AnalyticError> {
    if profile.len() < 16 {
        return Err(AnalyticError::Input(format!("profile needs at least 16 samples, got {}", profile.len())));
    }
    if profile.iter().any(|v| !v.is_finite()) {
        return Err(AnalyticError::Input("profile contains non-finite samples".into()));
    }
    Ok(())
}

/// `d^order/ds^order` of periodic samples spanning one period `length`.
/// Odd orders drop the Nyquist mode.
pub fn spectral_derivative(samples: &[f64], length: f64, order: u32) -> Vec<f64> {
    let n = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let dk = 2.0 * std::f64::consts::PI / length;
    for (i, c) in buf.iter_mut().enumerate() {
        let m = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        let factor = if n.is_multiple_of(2) && i == n / 2 && order % 2 == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, m * dk).powu(order)
        };
        *c *= factor;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// Residual of the travelling-wave reduction evaluated on periodic samples
/// over one period `length`: `-υU'' + 3s(U²)'' + U''''` (quadratic) or
/// `-υV'' + 2s(V³)'' + V''''` (cubic), as `max|R| / max|U|`.
pub fn boussinesq_residual(
    profile: &[f64],
    length: f64,
    upsilon: f64,
    kind: EquationKind,
    branch: SignBranch,
) -> Result<f64, AnalyticError> {
    check_profile(profile)?;
    if !(length.is_finite() && length > 0.0) || !upsilon.is_finite() {
        return Err(AnalyticError::Input("length must be positive and upsilon finite".into()));
    }
    let scale = profile.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let s = branch.sign();
    let (c, p) = match kind {
        EquationKind::Quadratic => (3.0 * s, 2),
        EquationKind::Cubic => (2.0 * s, 3),
    };
    let powered: Vec<f64> = profile.iter().map(|v| v.powi(p)).collect();
    let u2 = spectral_derivative(profile, length, 2);
    let u4 = spectral_derivative(profile, length, 4);
    let f2 = spectral_derivative(&powered, length, 2);
    let r = (0..profile.len()).fold(0.0f64, |m, i| m.max((-upsilon * u2[i] + c * f2[i] + u4[i]).abs()));
    Ok(r / scale)
}

/// First distance at which characteristics of the dispersionless reduction
/// `U_χ + c(U) U_τ = 0` cross, `χ_s = -1 / min_τ ∂τ c(U₀(τ))`, with
/// `c = 3βU` (quadratic) or `c = -β₃V²` (cubic). `None` when characteristics
/// never converge.
pub fn shock_distance(
    profile: &[f64],
    period: f64,
    kind: EquationKind,
    coeff: f64,
) -> Result<Option<f64>, AnalyticError> {
    if coeff == 0.0 || !coeff.is_finite() {
        return Err(AnalyticError::Degenerate(format!("nonlinearity coefficient must be nonzero, got {coeff}")));
    }
    check_profile(profile)?;
    if !(period.is_finite() && period > 0.0) {
        return Err(AnalyticError::Input(format!("period must be positive, got {period}")));
    }
    let c: Vec<f64> = match kind {
        EquationKind::Quadratic => profile.iter().map(|u| 3.0 * coeff * u).collect(),
        EquationKind::Cubic => profile.iter().map(|v| -coeff * v * v).collect(),
    };
    let dc = spectral_derivative(&c, period, 1);
    let min = dc.iter().cloned().fold(f64::INFINITY, f64::min);
    // rounding noise of a spectral derivative of a constant
    let c_max = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * c_max * profile.len() as f64 / period;
    if min >= -tol {
        return Ok(None);
    }
    Ok(Some(-1.0 / min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::EquationSpec;
    use crate::spectral::{kp_residual, make_grid, Domain, Field2D};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(kind: EquationKind, branch: SignBranch, kappa: f64, theta: f64) -> SolitonParams {
        SolitonParams::new(kind, branch, kappa, theta, 0.0).unwrap()
    }

    fn samples(n: usize, half: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let dx = 2.0 * half / n as f64;
        (0..n).map(|i| f(-half + i as f64 * dx)).collect()
    }

    #[test]
    fn speeds() {
        assert_eq!(soliton_speed(EquationKind::Quadratic, 1.0, 0.0), 4.0);
        assert_eq!(soliton_speed(EquationKind::Cubic, 1.0, 0.0), 1.0);
        assert_eq!(soliton_speed(EquationKind::Quadratic, 0.5, 1.0), 2.0);
        assert_eq!(params(EquationKind::Cubic, SignBranch::Plus, 2.0, 0.5).speed(), 4.25);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(SolitonParams::new(EquationKind::Cubic, SignBranch::Plus, 0.0, 0.0, 0.0).is_err());
        assert!(SolitonParams::new(EquationKind::Cubic, SignBranch::Plus, -1.0, 0.0, 0.0).is_err());
        assert!(SolitonParams::new(EquationKind::Cubic, SignBranch::Plus, 1.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn soliton_values_at_origin() {
        let q = params(EquationKind::Quadratic, SignBranch::Plus, 1.0, 0.0);
        let c = params(EquationKind::Cubic, SignBranch::Plus, 1.0, 0.0);
        assert_eq!(line_soliton(&q, 0.0, 0.0, 0.0), 2.0);
        assert_eq!(line_soliton(&c, 0.0, 0.0, 0.0), 1.0);
        let qm = params(EquationKind::Quadratic, SignBranch::Minus, 1.0, 0.0);
        assert_eq!(line_soliton(&qm, 0.0, 0.0, 0.0), -2.0);
        for x in [13.5, -13.5, 40.0, -800.0] {
            assert!(line_soliton(&q, 0.0, x, 0.0).abs() < 1e-10);
        }
    }

    #[test]
    fn initial_conditions() {
        for y in [-3.0, 0.0, 7.5] {
            assert_eq!(initial_condition(InitialCondition::SolitonQuad, 0.0, y), 2.0);
            assert_eq!(initial_condition(InitialCondition::SolitonCubic, 0.0, y), 1.0);
        }
        assert_eq!(initial_condition(InitialCondition::RadialQuad, 0.0, 0.0), 0.0);
        assert_eq!(initial_condition(InitialCondition::RadialCubic, 0.0, 0.0), 0.0);
        // central difference of -sech(x) at x = 1
        let h = 1e-6;
        let fd = -(sech(1.0 + h) - sech(1.0 - h)) / (2.0 * h);
        assert!((initial_condition(InitialCondition::RadialCubic, 1.0, 0.0) - fd).abs() < 1e-8);
        let fd = -(sech(1.0 + h).powi(2) - sech(1.0 - h).powi(2)) / (2.0 * h);
        assert!((initial_condition(InitialCondition::RadialQuad, 1.0, 0.0) - fd).abs() < 1e-8);
        assert_eq!("radial_cubic".parse::<InitialCondition>(), Ok(InitialCondition::RadialCubic));
        assert!("radial".parse::<InitialCondition>().is_err());
    }

    #[test]
    fn radial_rows_have_zero_mean() {
        let g = make_grid(64, 32, Domain::centered(4.0 * PI, 4.0 * PI)).unwrap();
        for ic in [InitialCondition::RadialQuad, InitialCondition::RadialCubic] {
            let f = Field2D::from_fn(&g, |x, y| initial_condition(ic, x, y));
            for j in 0..g.ny() {
                // x = x_min has no mirror sample on a periodic grid
                let sum: f64 = f.row(j)[1..].iter().sum();
                assert!(sum.abs() < 1e-12, "{ic} row {j}: {sum}");
            }
        }
    }

    #[test]
    fn radial_gradient_matches_finite_difference_off_axis() {
        let h = 1e-6;
        for (x, y) in [(0.3, 0.7), (-1.2, 2.0), (2.5, -0.1)] {
            let g = |x: f64| sech(x.hypot(y));
            let fd = -(g(x + h) - g(x - h)) / (2.0 * h);
            assert!((initial_condition(InitialCondition::RadialCubic, x, y) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let n = 64;
        let u = samples(n, PI, |x| (3.0 * x).sin());
        let d = spectral_derivative(&u, 2.0 * PI, 1);
        let d4 = spectral_derivative(&u, 2.0 * PI, 4);
        for i in 0..n {
            let x = -PI + i as f64 * 2.0 * PI / n as f64;
            assert!((d[i] - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
            assert!((d4[i] - 81.0 * (3.0 * x).sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn boussinesq_zero_profile() {
        let r = boussinesq_residual(&[0.0; 32], 1.0, 4.0, EquationKind::Quadratic, SignBranch::Plus).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn boussinesq_rejects_bad_input() {
        let mut p = vec![0.0; 32];
        p[3] = f64::NAN;
        assert!(boussinesq_residual(&p, 1.0, 1.0, EquationKind::Cubic, SignBranch::Plus).is_err());
        assert!(boussinesq_residual(&[0.0; 8], 1.0, 1.0, EquationKind::Cubic, SignBranch::Plus).is_err());
    }

    #[test]
    fn boussinesq_solitons_on_wide_domains() {
        // wide enough that the periodic extension is smooth to rounding
        let q = params(EquationKind::Quadratic, SignBranch::Plus, 1.0, 0.0);
        let u = samples(512, 8.0 * PI, |x| line_soliton(&q, 0.0, x, 0.0));
        let r = boussinesq_residual(&u, 16.0 * PI, 4.0, EquationKind::Quadratic, SignBranch::Plus).unwrap();
        assert!(r < 1e-6, "quadratic {r}");
        let c = params(EquationKind::Cubic, SignBranch::Plus, 1.0, 0.0);
        let v = samples(512, 8.0 * PI, |x| line_soliton(&c, 0.0, x, 0.0));
        let r = boussinesq_residual(&v, 16.0 * PI, 1.0, EquationKind::Cubic, SignBranch::Plus).unwrap();
        assert!(r < 1e-6, "cubic {r}");
        // wrong speed is detected
        let r = boussinesq_residual(&v, 16.0 * PI, 1.5, EquationKind::Cubic, SignBranch::Plus).unwrap();
        assert!(r > 1e-2);
    }

    #[test]
    fn quadratic_minus_soliton_solves_its_branch() {
        let q = params(EquationKind::Quadratic, SignBranch::Minus, 1.0, 0.0);
        let u = samples(512, 8.0 * PI, |x| line_soliton(&q, 0.0, x, 0.0));
        let r = boussinesq_residual(&u, 16.0 * PI, 4.0, EquationKind::Quadratic, SignBranch::Minus).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    /// `∂t` of the soliton at `t = 0` in closed form.
    fn soliton_time_derivative(p: &SolitonParams, x: f64, y: f64) -> f64 {
        let k = p.kappa();
        let phase = k * (x + p.theta() * y + p.x0());
        let (s, t) = (sech(phase), phase.tanh());
        let d_phase = match p.kind() {
            EquationKind::Quadratic => -4.0 * k * k * s * s * t,
            EquationKind::Cubic => -k * s * t,
        };
        -p.branch().sign() * p.speed() * k * d_phase
    }

    fn pde_residual(p: &SolitonParams, n: usize, half: f64) -> f64 {
        let g = make_grid(n, n, Domain::centered(half, half)).unwrap();
        let spec = EquationSpec::canonical(p.kind(), p.branch());
        let u = Field2D::from_fn(&g, |x, y| line_soliton(p, 0.0, x, y));
        let u_t = Field2D::from_fn(&g, |x, y| soliton_time_derivative(p, x, y));
        let r = kp_residual(&spec, &u, &u_t, &g);
        r.max_abs() / u.max_abs()
    }

    #[test]
    fn line_solitons_solve_the_full_equation() {
        // θ = 0 keeps the field periodic in y; the domain is wide enough for
        // the periodic extension to be smooth to rounding
        let q = params(EquationKind::Quadratic, SignBranch::Plus, 1.0, 0.0);
        let r = pde_residual(&q, 512, 8.0 * PI);
        assert!(r < 1e-6, "quadratic {r}");
        let c = params(EquationKind::Cubic, SignBranch::Plus, 1.0, 0.0);
        let r = pde_residual(&c, 256, 8.0 * PI);
        assert!(r < 1e-6, "cubic {r}");
    }

    #[test]
    fn negated_cubic_soliton_is_also_a_solution() {
        let c = params(EquationKind::Cubic, SignBranch::Plus, 1.0, 0.0);
        let g = make_grid(128, 16, Domain::centered(8.0 * PI, PI)).unwrap();
        let spec = EquationSpec::canonical(EquationKind::Cubic, SignBranch::Plus);
        let field = |sign: f64| {
            let u = Field2D::from_fn(&g, |x, y| sign * line_soliton(&c, 0.0, x, y));
            let ut = Field2D::from_fn(&g, |x, y| sign * soliton_time_derivative(&c, x, y));
            kp_residual(&spec, &u, &ut, &g).max_abs()
        };
        assert!((field(1.0) - field(-1.0)).abs() < 1e-12);
    }

    /// Marches characteristics `τ(χ) = τ₀ + c(τ₀) χ` of a fine sample set and
    /// returns the first `χ` where two neighbours swap order.
    fn marched_crossing(c: impl Fn(f64) -> f64, period: f64, n: usize, dchi: f64, chi_max: f64) -> Option<f64> {
        let tau0: Vec<f64> = (0..n).map(|i| i as f64 * period / n as f64).collect();
        let speed: Vec<f64> = tau0.iter().map(|&t| c(t)).collect();
        let mut chi = 0.0;
        while chi < chi_max {
            chi += dchi;
            let crossed = (0..n).any(|i| {
                let j = (i + 1) % n;
                let gap = if j == 0 { period } else { 0.0 };
                tau0[j] + gap + speed[j] * chi <= tau0[i] + speed[i] * chi
            });
            if crossed {
                return Some(chi);
            }
        }
        None
    }

    #[test]
    fn shock_distance_matches_marched_characteristics() {
        let n = 256;
        let period = 2.0 * PI;
        for sign in [1.0, -1.0] {
            let u = samples(n, PI, |t| sign * (t + PI).sin());
            let chi = shock_distance(&u, period, EquationKind::Quadratic, 1.0 / 3.0).unwrap().unwrap();
            assert!((chi - 1.0).abs() < 1e-12, "{chi}");
            let marched = marched_crossing(|t| sign * t.sin(), period, 4096, 1e-4, 3.0).unwrap();
            assert!((marched - chi).abs() < 2e-3, "marched {marched} vs {chi}");
        }
    }

    #[test]
    fn cubic_shock_distance_matches_marched_characteristics() {
        let n = 256;
        let period = 2.0 * PI;
        let beta3 = 1.5;
        let u = samples(n, PI, |t| 0.5 * (t + PI).sin() + 0.2);
        let chi = shock_distance(&u, period, EquationKind::Cubic, beta3).unwrap().unwrap();
        let marched = marched_crossing(|t| -beta3 * (0.5 * t.sin() + 0.2).powi(2), period, 4096, 1e-4, 10.0).unwrap();
        assert!((marched - chi).abs() < 2e-3 * chi, "marched {marched} vs {chi}");
    }

    #[test]
    fn constant_profile_never_shocks() {
        assert_eq!(shock_distance(&[0.7; 64], 2.0 * PI, EquationKind::Quadratic, 1.0), Ok(None));
        assert_eq!(shock_distance(&[0.7; 64], 2.0 * PI, EquationKind::Cubic, -2.0), Ok(None));
        assert!(matches!(
            shock_distance(&[0.7; 64], 2.0 * PI, EquationKind::Cubic, 0.0),
            Err(AnalyticError::Degenerate(_))
        ));
    }

    proptest! {
        #[test]
        fn translation_covariance(a in -20.0f64..20.0, x in -20.0f64..20.0, y in -5.0f64..5.0, t in 0.0f64..3.0,
                                  kappa in 0.2f64..2.0, theta in -1.0f64..1.0, cubic: bool) {
            let kind = if cubic { EquationKind::Cubic } else { EquationKind::Quadratic };
            let p = params(kind, SignBranch::Plus, kappa, theta);
            let shifted = line_soliton(&p.with_x0(a), t, x, y);
            let moved = line_soliton(&p, t, x + a, y);
            prop_assert!((shifted - moved).abs() <= 1e-12 * (1.0 + moved.abs()));
        }

        #[test]
        fn shock_distance_scales_inversely_with_amplitude(amp in 0.1f64..5.0, beta in 0.1f64..3.0) {
            let u = samples(64, PI, |t| amp * (t + PI).sin());
            let chi = shock_distance(&u, 2.0 * PI, EquationKind::Quadratic, beta).unwrap().unwrap();
            prop_assert!((chi * 3.0 * beta * amp - 1.0).abs() < 1e-10);
        }
    }
}
