use std::f64::consts::PI;

use super::SolverError;

/// Periodic rectangle `[x_min, x_max) × [y_min, y_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Domain {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self { x_min, x_max, y_min, y_max }
    }

    /// `[-a, a] × [-b, b]`.
    pub fn centered(half_x: f64, half_y: f64) -> Self {
        Self::new(-half_x, half_x, -half_y, half_y)
    }

    pub fn lx(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn ly(&self) -> f64 {
        self.y_max - self.y_min
    }

    fn validate(&self) -> Result<(), SolverError> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || !(self.lx() > 0.0) || !(self.ly() > 0.0) {
            return Err(SolverError::Config(format!("empty or non-finite domain {self:?}")));
        }
        Ok(())
    }
}

/// Sample counts, domain and the wavenumber arrays in FFT ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    nx: usize,
    ny: usize,
    domain: Domain,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

/// Wavenumbers `2π m / length` with `m = 0, 1, …, n/2-1, -n/2, …, -1`.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let dk = 2.0 * PI / length;
    (0..n)
        .map(|i| {
            let m = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
            m as f64 * dk
        })
        .collect()
}

/// Minimum number of samples per direction.
pub const MIN_POINTS: usize = 16;

pub fn make_grid(nx: usize, ny: usize, domain: Domain) -> Result<SpectralGrid, SolverError> {
    for (name, n) in [("nx", nx), ("ny", ny)] {
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(SolverError::Config(format!(
                "{name} = {n} must be a power of two and at least {MIN_POINTS}"
            )));
        }
    }
    domain.validate()?;
    Ok(SpectralGrid {
        nx,
        ny,
        domain,
        kx: wavenumbers(nx, domain.lx()),
        ky: wavenumbers(ny, domain.ly()),
    })
}

impl SpectralGrid {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of stored `kx` columns in a half spectrum.
    pub fn nxh(&self) -> usize {
        self.nx / 2 + 1
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn kx(&self) -> &[f64] {
        &self.kx
    }

    pub fn ky(&self) -> &[f64] {
        &self.ky
    }

    pub fn dx(&self) -> f64 {
        self.domain.lx() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.domain.ly() / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.domain.x_min + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.domain.y_min + j as f64 * self.dy()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_follows_period() {
        let g = make_grid(256, 16, Domain::centered(4.0 * PI, PI)).unwrap();
        assert!((g.kx()[1] - 0.25).abs() < 1e-15);
        let g = make_grid(16, 16, Domain::new(0.0, 2.0 * PI, 0.0, 4.0 * PI)).unwrap();
        let expected: Vec<f64> = (0..8).chain(-8..0).map(|m| m as f64).collect();
        for (k, e) in g.kx().iter().zip(&expected) {
            assert!((k - e).abs() < 1e-14);
        }
        assert!((g.ky()[1] - 0.5).abs() < 1e-15);
        assert_eq!(g.kx()[0], 0.0);
        assert_eq!(g.ky()[0], 0.0);
    }

    #[test]
    fn antisymmetric_except_nyquist() {
        let g = make_grid(32, 64, Domain::centered(3.0, 5.0)).unwrap();
        for (k, n) in [(g.kx(), 32usize), (g.ky(), 64)] {
            for i in 1..n {
                if i == n / 2 {
                    continue;
                }
                assert_eq!(k[i], -k[n - i]);
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        let d = Domain::centered(1.0, 1.0);
        assert!(make_grid(100, 16, d).is_err());
        assert!(make_grid(8, 16, d).is_err());
        assert!(make_grid(16, 16, Domain::new(1.0, 1.0, 0.0, 1.0)).is_err());
    }
}
