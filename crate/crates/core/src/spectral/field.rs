use super::{Domain, SolverError, SpectralGrid};

/// Real samples on a periodic grid, stored row-major with `y` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    nx: usize,
    ny: usize,
    domain: Domain,
    values: Vec<f64>,
}

impl Field2D {
    pub fn zeros(grid: &SpectralGrid) -> Self {
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            domain: *grid.domain(),
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f(x, y)` at the grid nodes.
    pub fn from_fn(grid: &SpectralGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            let y = grid.y(j);
            values.extend((0..grid.nx()).map(|i| f(grid.x(i), y)));
        }
        Self { nx: grid.nx(), ny: grid.ny(), domain: *grid.domain(), values }
    }

    pub fn from_values(nx: usize, ny: usize, domain: Domain, values: Vec<f64>) -> Result<Self, SolverError> {
        if nx.checked_mul(ny) != Some(values.len()) {
            return Err(SolverError::Config(format!(
                "{} values do not fill a {nx}x{ny} grid",
                values.len()
            )));
        }
        Ok(Self { nx, ny, domain, values })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Samples along the line `y = y_j`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nx..(j + 1) * self.nx]
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

    /// Whether `self` lives on `grid`.
    pub fn matches(&self, grid: &SpectralGrid) -> bool {
        self.nx == grid.nx() && self.ny == grid.ny() && self.domain == *grid.domain()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
