//! Elastic material constants and the nonlinearity coefficients they induce.
//!
//! Compressible solids lead to the quadratic KP equation through the
//! coefficient `beta`; incompressible solids lead to the cubic variant through
//! `beta3`. The sign of either coefficient fixes the sign branch of the
//! canonical equation.

use std::fmt;

use thiserror::Error;

/// Relative tolerance for the `gamma0 == mu` consistency check.
pub const SHEAR_MODULUS_RTOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("degenerate equation: {0}")]
    Degenerate(String),
}

/// Which canonical equation is being described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationKind {
    /// `(U_t ∓ 6 U U_x + U_xxx)_x = -U_yy`, compressible solids.
    Quadratic,
    /// `(V_t ± 6 V² V_x + V_xxx)_x = -V_yy`, incompressible solids.
    Cubic,
}

impl EquationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquationKind::Quadratic => "quadratic",
            EquationKind::Cubic => "cubic",
        }
    }

    /// Power of the unknown appearing in the nonlinear flux.
    pub fn power(self) -> i32 {
        match self {
            EquationKind::Quadratic => 2,
            EquationKind::Cubic => 3,
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EquationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quadratic" | "quad" => Ok(EquationKind::Quadratic),
            "cubic" => Ok(EquationKind::Cubic),
            other => Err(format!("unknown equation kind `{other}` (expected quadratic|cubic)")),
        }
    }
}

/// Sign of the nonlinear term of the canonical equation.
///
/// `Plus` is the `+6 U U_x` (resp. `+6 V² V_x`) variant, `Minus` the
/// `-6 U U_x` (resp. `-6 V² V_x`) variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignBranch::Plus => "plus",
            SignBranch::Minus => "minus",
        }
    }
}

impl fmt::Display for SignBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SignBranch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(SignBranch::Plus),
            "minus" | "-" => Ok(SignBranch::Minus),
            other => Err(format!("unknown sign branch `{other}` (expected plus|minus)")),
        }
    }
}

/// Dispersion parameter, either physical or already non-dimensionalised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dispersion {
    /// `nu0` directly.
    Dimensionless(f64),
    /// Physical `nu` (Pa·s²) with the length scale `L` and small parameter `epsilon`.
    Physical { nu: f64, length: f64, epsilon: f64 },
}

impl Dispersion {
    /// `nu0` given the density. The compressible scaling is
    /// `nu = eps rho0 L² nu0`, the incompressible one `nu = eps² rho0 L² nu0`.
    fn nu0(&self, rho0: f64, incompressible: bool) -> Result<f64, MaterialError> {
        let nu0 = match *self {
            Dispersion::Dimensionless(nu0) => nu0,
            Dispersion::Physical { nu, length, epsilon } => {
                if !(length > 0.0) || !(epsilon > 0.0) {
                    return Err(MaterialError::InvalidMaterial(
                        "dispersion needs L > 0 and epsilon > 0".into(),
                    ));
                }
                let eps_power = if incompressible { epsilon * epsilon } else { epsilon };
                nu / (eps_power * rho0 * length * length)
            }
        };
        if !(nu0.is_finite() && nu0 > 0.0) {
            return Err(MaterialError::InvalidMaterial(format!("nu0 must be positive, got {nu0}")));
        }
        Ok(nu0)
    }
}

/// Constant terms of the expansions of the constitutive coefficients
/// `alpha` and `gamma` in powers of the small parameter (Pa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialCompressible {
    lambda: f64,
    mu: f64,
    rho0: f64,
    taylor: TaylorConstants,
    nu0: f64,
}

impl MaterialCompressible {
    pub fn new(
        lambda: f64,
        mu: f64,
        rho0: f64,
        taylor: TaylorConstants,
        dispersion: Dispersion,
    ) -> Result<Self, MaterialError> {
        let all = [
            lambda,
            mu,
            rho0,
            taylor.alpha1,
            taylor.alpha2,
            taylor.gamma0,
            taylor.gamma1,
            taylor.gamma2,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(MaterialError::InvalidMaterial("non-finite constant".into()));
        }
        if !(mu > 0.0) {
            return Err(MaterialError::InvalidMaterial(format!("mu must be positive, got {mu}")));
        }
        if !(rho0 > 0.0) {
            return Err(MaterialError::InvalidMaterial(format!("rho0 must be positive, got {rho0}")));
        }
        if !(lambda + 2.0 * mu > 0.0) {
            return Err(MaterialError::InvalidMaterial(format!(
                "lambda + 2 mu must be positive, got {}",
                lambda + 2.0 * mu
            )));
        }
        if (taylor.gamma0 - mu).abs() > SHEAR_MODULUS_RTOL * mu.abs() {
            return Err(MaterialError::InvalidMaterial(format!(
                "gamma0 ({}) must equal the shear modulus mu ({mu})",
                taylor.gamma0
            )));
        }
        let nu0 = dispersion.nu0(rho0, false)?;
        Ok(Self { lambda, mu, rho0, taylor, nu0 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn taylor(&self) -> &TaylorConstants {
        &self.taylor
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialIncompressible {
    mu: f64,
    rho0: f64,
    landau_a: f64,
    landau_d: f64,
    nu0: f64,
}

impl MaterialIncompressible {
    /// `landau_a` and `landau_d` are the third- and fourth-order Landau constants.
    pub fn new(
        mu: f64,
        rho0: f64,
        landau_a: f64,
        landau_d: f64,
        dispersion: Dispersion,
    ) -> Result<Self, MaterialError> {
        if [mu, rho0, landau_a, landau_d].iter().any(|v| !v.is_finite()) {
            return Err(MaterialError::InvalidMaterial("non-finite constant".into()));
        }
        if !(mu > 0.0) {
            return Err(MaterialError::InvalidMaterial(format!("mu must be positive, got {mu}")));
        }
        if !(rho0 > 0.0) {
            return Err(MaterialError::InvalidMaterial(format!("rho0 must be positive, got {rho0}")));
        }
        let nu0 = dispersion.nu0(rho0, true)?;
        Ok(Self { mu, rho0, landau_a, landau_d, nu0 })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn landau_a(&self) -> f64 {
        self.landau_a
    }

    pub fn landau_d(&self) -> f64 {
        self.landau_d
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    /// Speed of the linear shear wave.
    pub fn shear_speed(&self) -> f64 {
        (self.mu / self.rho0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds {
    /// Longitudinal speed `c_ell`.
    pub longitudinal: f64,
    /// Transverse speed `c_t`.
    pub transverse: f64,
    /// `rho0 c_ell² - (alpha1 + gamma0 + gamma1)`; zero for a consistent expansion.
    pub identity_residual: f64,
}

/// Linear longitudinal and transverse wave speeds.
pub fn wave_speeds(m: &MaterialCompressible) -> Result<WaveSpeeds, MaterialError> {
    let longitudinal_sq = (m.lambda + 2.0 * m.mu) / m.rho0;
    let transverse_sq = m.mu / m.rho0;
    if longitudinal_sq < 0.0 || transverse_sq < 0.0 {
        return Err(MaterialError::InvalidMaterial("negative squared wave speed".into()));
    }
    let t = &m.taylor;
    Ok(WaveSpeeds {
        longitudinal: longitudinal_sq.sqrt(),
        transverse: transverse_sq.sqrt(),
        identity_residual: m.rho0 * longitudinal_sq - (t.alpha1 + t.gamma0 + t.gamma1),
    })
}

/// Quadratic nonlinearity coefficient
/// `beta = (c_t² / c_ell²) (alpha2 + gamma2 + gamma1) / (3 gamma0)`.
pub fn beta_quadratic(m: &MaterialCompressible) -> Result<f64, MaterialError> {
    let t = &m.taylor;
    if t.gamma0 == 0.0 {
        return Err(MaterialError::InvalidMaterial("gamma0 is zero".into()));
    }
    // c_t²/c_ell² without the square roots
    let ratio = m.mu / (m.lambda + 2.0 * m.mu);
    Ok(ratio * (t.alpha2 + t.gamma2 + t.gamma1) / (3.0 * t.gamma0))
}

/// Cubic nonlinearity coefficient from the Landau constants,
/// `beta3 = 3/2 (1 + (A/2 + D)/mu)`.
pub fn beta3_landau(m: &MaterialIncompressible) -> f64 {
    1.5 * (1.0 + (0.5 * m.landau_a + m.landau_d) / m.mu)
}

/// Cubic nonlinearity coefficient from the expansion of `gamma`,
/// `beta3 = 3/2 gamma1 / gamma0`.
pub fn beta3_from_gamma(gamma0: f64, gamma1: f64) -> Result<f64, MaterialError> {
    if gamma0 == 0.0 || !gamma0.is_finite() || !gamma1.is_finite() {
        return Err(MaterialError::InvalidMaterial("gamma0 must be finite and nonzero".into()));
    }
    Ok(1.5 * gamma1 / gamma0)
}

/// A canonical equation together with the coefficients it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationSpec {
    kind: EquationKind,
    branch: SignBranch,
    nonlin_coeff: f64,
    nu0: f64,
}

impl EquationSpec {
    /// Selects the sign branch from the sign of the nonlinearity coefficient:
    /// positive `beta` gives the minus branch, positive `beta3` the plus branch.
    pub fn new(kind: EquationKind, nonlin_coeff: f64, nu0: f64) -> Result<Self, MaterialError> {
        if !nonlin_coeff.is_finite() || nonlin_coeff == 0.0 {
            return Err(MaterialError::Degenerate(format!(
                "nonlinearity coefficient must be finite and nonzero, got {nonlin_coeff}"
            )));
        }
        if !(nu0.is_finite() && nu0 > 0.0) {
            return Err(MaterialError::Degenerate(format!("nu0 must be positive, got {nu0}")));
        }
        let positive = nonlin_coeff > 0.0;
        let branch = match (kind, positive) {
            (EquationKind::Quadratic, true) | (EquationKind::Cubic, false) => SignBranch::Minus,
            (EquationKind::Quadratic, false) | (EquationKind::Cubic, true) => SignBranch::Plus,
        };
        Ok(Self { kind, branch, nonlin_coeff, nu0 })
    }

    /// An equation given directly in canonical form. The stored coefficient is
    /// the unit coefficient consistent with `branch`, and `nu0 = 1`.
    pub fn canonical(kind: EquationKind, branch: SignBranch) -> Self {
        let nonlin_coeff = match (kind, branch) {
            (EquationKind::Quadratic, SignBranch::Minus) | (EquationKind::Cubic, SignBranch::Plus) => 1.0,
            _ => -1.0,
        };
        Self { kind, branch, nonlin_coeff, nu0: 1.0 }
    }

    pub fn from_compressible(m: &MaterialCompressible) -> Result<Self, MaterialError> {
        Self::new(EquationKind::Quadratic, beta_quadratic(m)?, m.nu0())
    }

    pub fn from_incompressible(m: &MaterialIncompressible) -> Result<Self, MaterialError> {
        Self::new(EquationKind::Cubic, beta3_landau(m), m.nu0())
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn branch(&self) -> SignBranch {
        self.branch
    }

    pub fn nonlin_coeff(&self) -> f64 {
        self.nonlin_coeff
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    /// Short tag such as `quadratic-plus`, used in snapshot headers.
    pub fn tag(&self) -> String {
        format!("{}-{}", self.kind, self.branch)
    }
}
