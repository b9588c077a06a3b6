//! Coordinate and amplitude rescalings.
//!
//! Three coordinate systems are involved:
//!
//! * laboratory coordinates `(X, Y, t_phys)`,
//! * slow multiple-scales coordinates `(chi, tau, eta)`,
//! * canonical KP coordinates `(sim_time, profile_coord, transverse)`.
//!
//! The canonical "time" is a scaled propagation distance (proportional to
//! `X`) and the canonical `x` is a scaled retarded time. They are named
//! `sim_time` and `profile_coord` here so they are not confused with the
//! laboratory time and position.

use crate::material::{EquationKind, EquationSpec};

/// Point in slow multiple-scales coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowPoint {
    /// Slow propagation distance.
    pub chi: f64,
    /// Retarded time in the moving frame.
    pub tau: f64,
    /// Slow transverse coordinate.
    pub eta: f64,
}

/// Point in canonical KP coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPoint {
    /// Canonical `t`: scaled propagation distance, not laboratory time.
    pub sim_time: f64,
    /// Canonical `x`: scaled retarded time.
    pub profile_coord: f64,
    /// Canonical `y`.
    pub transverse: f64,
}

/// Laboratory point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Multiplicative factors taking `(chi, tau, eta)` to `(t, x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalScaling {
    pub s_t: f64,
    pub s_x: f64,
    pub s_y: f64,
    pub kind: EquationKind,
}

/// Scale factors of the change of variables to canonical form.
///
/// Quadratic: `s_t = -|b|^{3/2}/sqrt(8 nu0)`, `s_x = |b|^{1/2}/sqrt(2 nu0)`,
/// `s_y = |b|/sqrt(2 nu0)`.
/// Cubic: `s_t = -|b|^{3/2}/(6 sqrt(3 nu0))`, `s_x = |b|^{1/2}/sqrt(3 nu0)`,
/// `s_y = |b|/(3 sqrt(nu0))`.
pub fn scale_factors(spec: &EquationSpec) -> CanonicalScaling {
    let b = spec.nonlin_coeff().abs();
    let nu0 = spec.nu0();
    let (s_t, s_x, s_y) = match spec.kind() {
        EquationKind::Quadratic => (
            -b.powf(1.5) / (8.0 * nu0).sqrt(),
            b.sqrt() / (2.0 * nu0).sqrt(),
            b / (2.0 * nu0).sqrt(),
        ),
        EquationKind::Cubic => (
            -b.powf(1.5) / (6.0 * (3.0 * nu0).sqrt()),
            b.sqrt() / (3.0 * nu0).sqrt(),
            b / (3.0 * nu0.sqrt()),
        ),
    };
    CanonicalScaling { s_t, s_x, s_y, kind: spec.kind() }
}

impl CanonicalScaling {
    pub fn to_canonical(&self, p: SlowPoint) -> CanonicalPoint {
        CanonicalPoint {
            sim_time: self.s_t * p.chi,
            profile_coord: self.s_x * p.tau,
            transverse: self.s_y * p.eta,
        }
    }

    pub fn to_slow(&self, p: CanonicalPoint) -> SlowPoint {
        SlowPoint {
            chi: p.sim_time / self.s_t,
            tau: p.profile_coord / self.s_x,
            eta: p.transverse / self.s_y,
        }
    }
}

/// Componentwise map on raw triples ordered `(chi, tau, eta)` / `(t, x, y)`.
pub fn map_coords(p: [f64; 3], s: &CanonicalScaling, direction: Direction) -> [f64; 3] {
    let f = [s.s_t, s.s_x, s.s_y];
    match direction {
        Direction::Forward => [f[0] * p[0], f[1] * p[1], f[2] * p[2]],
        Direction::Inverse => [p[0] / f[0], p[1] / f[1], p[2] / f[2]],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Compressible,
    Incompressible,
}

/// Laboratory scaling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScaling {
    /// Small parameter, `0 < epsilon < 1`.
    pub epsilon: f64,
    /// Characteristic length (m).
    pub length: f64,
    /// Frame speed: `c_ell` for compressible, `c_t` for incompressible (m/s).
    pub speed: f64,
    pub regime: Regime,
}

impl PhysicalScaling {
    /// Exponents of epsilon on `(chi, eta)`.
    fn slow_powers(&self) -> (f64, f64) {
        match self.regime {
            Regime::Compressible => (self.epsilon, self.epsilon.sqrt()),
            Regime::Incompressible => (self.epsilon * self.epsilon, self.epsilon),
        }
    }

    /// Displacement amplitude factors `(u/u~, v/v~)`.
    pub fn displacement_scales(&self) -> (f64, f64) {
        let (e, l) = (self.epsilon, self.length);
        match self.regime {
            Regime::Compressible => (e * l, e.powf(1.5) * l),
            Regime::Incompressible => (e * e * l, e * l),
        }
    }
}

/// Laboratory coordinates to slow coordinates.
pub fn physical_coords(p: PhysicalPoint, ps: &PhysicalScaling) -> SlowPoint {
    let (fx, fy) = ps.slow_powers();
    SlowPoint {
        chi: fx * p.x / ps.length,
        eta: fy * p.y / ps.length,
        tau: (ps.speed * p.t - p.x) / ps.length,
    }
}

/// Slow coordinates back to laboratory coordinates.
pub fn physical_from_slow(p: SlowPoint, ps: &PhysicalScaling) -> PhysicalPoint {
    let (fx, fy) = ps.slow_powers();
    let x = ps.length * p.chi / fx;
    PhysicalPoint {
        x,
        y: ps.length * p.eta / fy,
        t: (ps.length * p.tau + x) / ps.speed,
    }
}

/// Particle-velocity amplitude (m/s) of one sample of `U` (or `V`): `epsilon c value`.
pub fn canonical_field_to_physical_velocity(value: f64, ps: &PhysicalScaling) -> f64 {
    ps.epsilon * ps.speed * value
}
