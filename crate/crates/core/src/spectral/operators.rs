//! Spectral symbols: the KP linear operator, the nonlinear flux and plain
//! spectral differentiation.

use num_complex::Complex64;

use super::{Fft2, Field2D, SolverError, SpectralGrid, Spectrum};
use crate::material::{EquationKind, EquationSpec, SignBranch};

/// Treatment of the `kx = 0` line, where `∂x⁻¹` is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroModePolicy {
    /// Keep the `1/(kx - i eps_reg)` regularisation; stage factors that
    /// overflow are saturated to zero.
    Regularize,
    /// Zero the `kx = 0, ky != 0` modes of the state and nonlinearity every
    /// stage and use `L = 0` there.
    #[default]
    Project,
}

impl std::str::FromStr for ZeroModePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "regularize" => Ok(Self::Regularize),
            "project" => Ok(Self::Project),
            other => Err(format!("unknown zero-mode policy `{other}` (expected regularize|project)")),
        }
    }
}

impl ZeroModePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Regularize => "regularize",
            Self::Project => "project",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dealias {
    #[default]
    Off,
    /// Zero the upper third of the spectrum of the nonlinear product.
    TwoThirds,
}

impl std::str::FromStr for Dealias {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "off" => Ok(Self::Off),
            "two_thirds" => Ok(Self::TwoThirds),
            other => Err(format!("unknown dealias mode `{other}` (expected off|two_thirds)")),
        }
    }
}

impl Dealias {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Off => "off",
            Self::TwoThirds => "two_thirds",
        }
    }
}

/// Default regularisation of the `kx = 0` singularity.
pub const DEFAULT_EPS_REG: f64 = 1e-16;

/// `L(kx, ky) = i ky²/(kx - i eps) - i kx³` on the half spectrum.
#[derive(Debug, Clone)]
pub struct LinearSymbol {
    values: Spectrum,
    policy: ZeroModePolicy,
}

impl LinearSymbol {
    pub fn values(&self) -> &Spectrum {
        &self.values
    }

    pub fn policy(&self) -> ZeroModePolicy {
        self.policy
    }

    /// Whether the mode is removed every stage under `Project`.
    pub fn is_projected(&self, ix: usize, iy: usize) -> bool {
        self.policy == ZeroModePolicy::Project && ix == 0 && iy != 0
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.values.get(ix, iy)
    }
}

fn symbol_entry(kx: f64, ky: f64, eps_reg: f64) -> Complex64 {
    // i ky² / (kx - i eps) = i ky² (kx + i eps) / (kx² + eps²)
    let den = kx * kx + eps_reg * eps_reg;
    let ky2 = ky * ky;
    Complex64::new(-ky2 * eps_reg / den, ky2 * kx / den - kx * kx * kx)
}

pub fn linear_symbol(grid: &SpectralGrid, eps_reg: f64, policy: ZeroModePolicy) -> LinearSymbol {
    let mut values = Spectrum::for_grid(grid);
    for ix in 0..grid.nxh() {
        let kx = grid.kx()[ix];
        for (iy, &ky) in grid.ky().iter().enumerate() {
            let l = if policy == ZeroModePolicy::Project && ix == 0 {
                // -i kx³ with kx = 0
                Complex64::new(0.0, 0.0)
            } else {
                symbol_entry(kx, ky, eps_reg)
            };
            values.set(ix, iy, l);
        }
    }
    LinearSymbol { values, policy }
}

/// Coefficient `n` of the nonlinear term `n i kx FT(U^p)`:
/// `-3 s` (quadratic) and `-2 s` (cubic), `s = +1` for the plus branch.
pub fn nonlinear_coefficient(kind: EquationKind, branch: SignBranch) -> f64 {
    match kind {
        EquationKind::Quadratic => -3.0 * branch.sign(),
        EquationKind::Cubic => -2.0 * branch.sign(),
    }
}

fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Whether the 2/3 rule keeps the mode at FFT indices `(ix, iy)`.
pub fn two_thirds_keeps(ix: usize, iy: usize, nx: usize, ny: usize) -> bool {
    let (mx, my) = (signed_index(ix, nx).unsigned_abs() as usize, signed_index(iy, ny).unsigned_abs() as usize);
    3 * mx <= nx && 3 * my <= ny
}

/// Precomputed `n i kx · mask` multiplier and the power of the flux. The
/// `kx` Nyquist column is dropped as for any odd derivative.
#[derive(Debug, Clone)]
pub(crate) struct NonlinearOp {
    power: i32,
    multiplier: Vec<Complex64>,
}

impl NonlinearOp {
    pub(crate) fn new(spec: &EquationSpec, grid: &SpectralGrid, dealias: Dealias) -> Self {
        let n = nonlinear_coefficient(spec.kind(), spec.branch());
        let ny = grid.ny();
        let mut multiplier = vec![Complex64::new(0.0, 0.0); grid.nxh() * ny];
        for ix in 0..grid.nxh() {
            let kx = grid.kx()[ix];
            for iy in 0..ny {
                let keep = ix != grid.nx() / 2
                    && match dealias {
                        Dealias::Off => true,
                        Dealias::TwoThirds => two_thirds_keeps(ix, iy, grid.nx(), ny),
                    };
                // kx = 0 gives an exact zero, which also covers the projected line
                if keep {
                    multiplier[ix * ny + iy] = Complex64::new(0.0, n * kx);
                }
            }
        }
        Self { power: spec.kind().power(), multiplier }
    }

    /// `out = multiplier · FT(IFT(state)^p)`; `phys` is scratch of grid size.
    pub(crate) fn apply(&self, fft: &mut Fft2, state: &Spectrum, phys: &mut [f64], out: &mut Spectrum) {
        fft.inverse(state, phys);
        self.apply_physical(fft, phys, out);
    }

    /// Same as [`apply`](Self::apply) starting from physical samples (overwritten).
    pub(crate) fn apply_physical(&self, fft: &mut Fft2, phys: &mut [f64], out: &mut Spectrum) {
        match self.power {
            2 => phys.iter_mut().for_each(|v| *v = *v * *v),
            _ => phys.iter_mut().for_each(|v| *v = *v * *v * *v),
        }
        fft.forward(phys, out);
        for (o, m) in out.data_mut().iter_mut().zip(&self.multiplier) {
            *o *= m;
        }
    }
}

/// `n i kx FT(U^p)` for the given field (unnormalised FFT convention).
pub fn nonlinear_term(
    spec: &EquationSpec,
    field: &Field2D,
    grid: &SpectralGrid,
    dealias: Dealias,
) -> Result<Spectrum, SolverError> {
    if !field.matches(grid) {
        return Err(SolverError::Config("field does not match the grid".into()));
    }
    if !field.is_finite() {
        return Err(SolverError::NonFinite("nonlinear term input".into()));
    }
    let op = NonlinearOp::new(spec, grid, dealias);
    let mut fft = Fft2::for_grid(grid);
    let mut phys = field.values().to_vec();
    let mut out = Spectrum::for_grid(grid);
    op.apply_physical(&mut fft, &mut phys, &mut out);
    if !out.is_finite() {
        return Err(SolverError::NonFinite("nonlinear term output".into()));
    }
    Ok(out)
}

/// `∂x^ox ∂y^oy` of a field by spectral differentiation. Odd derivatives
/// drop the Nyquist mode in that direction.
pub fn derivative(field: &Field2D, grid: &SpectralGrid, order_x: u32, order_y: u32) -> Field2D {
    let mut fft = Fft2::for_grid(grid);
    let mut spec = Spectrum::for_grid(grid);
    fft.forward(field.values(), &mut spec);
    apply_derivative(&mut spec, grid, order_x, order_y);
    let mut out = Field2D::zeros(grid);
    fft.inverse(&spec, out.values_mut());
    out
}

fn ik_power(k: f64, order: u32, nyquist: bool) -> Complex64 {
    if nyquist && order % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, k).powu(order)
}

fn apply_derivative(spec: &mut Spectrum, grid: &SpectralGrid, order_x: u32, order_y: u32) {
    let (nx, ny) = (grid.nx(), grid.ny());
    for ix in 0..grid.nxh() {
        let fx = ik_power(grid.kx()[ix], order_x, ix == nx / 2);
        for iy in 0..ny {
            let fy = ik_power(grid.ky()[iy], order_y, iy == ny / 2);
            let v = spec.get(ix, iy) * fx * fy;
            spec.set(ix, iy, v);
        }
    }
}

/// Residual of the canonical equation
/// `(U_t + 6 s U^{p-1} U_x + U_xxx)_x + U_yy` given `U` and `U_t`.
pub fn kp_residual(spec: &EquationSpec, u: &Field2D, u_t: &Field2D, grid: &SpectralGrid) -> Field2D {
    let mut fft = Fft2::for_grid(grid);
    let mut flux = Spectrum::for_grid(grid);
    let mut powered = u.values().to_vec();
    let p = spec.kind().power();
    powered.iter_mut().for_each(|v| *v = v.powi(p));
    fft.forward(&powered, &mut flux);
    let mut s_u = Spectrum::for_grid(grid);
    fft.forward(u.values(), &mut s_u);
    let mut s_ut = Spectrum::for_grid(grid);
    fft.forward(u_t.values(), &mut s_ut);

    // 6 U U_x = 3 (U²)_x and 6 V² V_x = 2 (V³)_x
    let c = -nonlinear_coefficient(spec.kind(), spec.branch());
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Spectrum::for_grid(grid);
    for ix in 0..grid.nxh() {
        let kx = grid.kx()[ix];
        let nyq = ix == nx / 2;
        let ikx = ik_power(kx, 1, nyq);
        for iy in 0..ny {
            let ky = grid.ky()[iy];
            let inner = s_ut.get(ix, iy) + ikx * c * flux.get(ix, iy) + ik_power(kx, 3, nyq) * s_u.get(ix, iy);
            out.set(ix, iy, ikx * inner - ky * ky * s_u.get(ix, iy));
        }
    }
    let mut r = Field2D::zeros(grid);
    fft.inverse(&out, r.values_mut());
    r
}
