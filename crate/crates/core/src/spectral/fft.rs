//! Real two-dimensional FFT with a half spectrum in transposed layout.
//!
//! The forward transform runs a real-to-complex FFT along `x` on every row,
//! transposes, then a complex FFT along `y`. The spectrum is therefore stored
//! as `nx/2 + 1` contiguous lines of `ny` coefficients, one line per
//! non-negative `kx` index (the last line is the `kx` Nyquist column).
//! Coefficients are unnormalised: `Û(k) = Σ U(x) exp(-i k·x)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use super::SpectralGrid;

/// Half spectrum, indexed `[ix][iy]` with `ix` in `0..=nx/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    nx: usize,
    ny: usize,
    data: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self { nx, ny, data: vec![Complex64::new(0.0, 0.0); (nx / 2 + 1) * ny] }
    }

    pub fn for_grid(grid: &SpectralGrid) -> Self {
        Self::zeros(grid.nx(), grid.ny())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nxh(&self) -> usize {
        self.nx / 2 + 1
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Stored coefficient, `ix <= nx/2`.
    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.data[ix * self.ny + iy]
    }

    pub fn set(&mut self, ix: usize, iy: usize, value: Complex64) {
        self.data[ix * self.ny + iy] = value;
    }

    /// Coefficient of the full spectrum at FFT indices `(ix, iy)`, using
    /// Hermitian symmetry for `ix > nx/2`.
    pub fn full(&self, ix: usize, iy: usize) -> Complex64 {
        if ix < self.nxh() {
            self.get(ix, iy)
        } else {
            self.get(self.nx - ix, (self.ny - iy) % self.ny).conj()
        }
    }

    /// Enforces `Û(0, -ky) = conj Û(0, ky)` on the `kx = 0` and Nyquist lines,
    /// the only stored lines where the half-spectrum layout does not imply it.
    pub fn symmetrize(&mut self) {
        let ny = self.ny;
        for ix in [0, self.nxh() - 1] {
            let line = &mut self.data[ix * ny..(ix + 1) * ny];
            for iy in 0..=ny / 2 {
                let jy = (ny - iy) % ny;
                let avg = 0.5 * (line[iy] + line[jy].conj());
                line[iy] = avg;
                line[jy] = avg.conj();
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Planned forward and inverse transforms for one grid size.
pub struct Fft2 {
    nx: usize,
    ny: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    /// Row-major staging buffer, `[ny][nx/2 + 1]`.
    rows: Vec<Complex64>,
    /// Transposed staging buffer for the inverse.
    cols: Vec<Complex64>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("nx", &self.nx).field("ny", &self.ny).finish()
    }
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut real = RealFftPlanner::<f64>::new();
        let mut complex = FftPlanner::<f64>::new();
        let nxh = nx / 2 + 1;
        Self {
            nx,
            ny,
            r2c: real.plan_fft_forward(nx),
            c2r: real.plan_fft_inverse(nx),
            fwd_y: complex.plan_fft_forward(ny),
            inv_y: complex.plan_fft_inverse(ny),
            rows: vec![Complex64::new(0.0, 0.0); nxh * ny],
            cols: vec![Complex64::new(0.0, 0.0); nxh * ny],
        }
    }

    pub fn for_grid(grid: &SpectralGrid) -> Self {
        Self::new(grid.nx(), grid.ny())
    }

    /// `input` is row-major `[ny][nx]`.
    pub fn forward(&mut self, input: &[f64], out: &mut Spectrum) {
        let (nx, ny, nxh) = (self.nx, self.ny, self.nx / 2 + 1);
        assert_eq!(input.len(), nx * ny);
        assert_eq!((out.nx, out.ny), (nx, ny));
        let r2c = &self.r2c;
        self.rows
            .par_chunks_mut(nxh)
            .zip(input.par_chunks(nx))
            .for_each_init(
                || (vec![0.0; nx], r2c.make_scratch_vec()),
                |(buf, scratch), (orow, irow)| {
                    buf.copy_from_slice(irow);
                    r2c.process_with_scratch(buf, orow, scratch)
                        .expect("buffer sizes match the plan");
                },
            );
        transpose(&self.rows, &mut out.data, ny, nxh);
        let fwd = &self.fwd_y;
        out.data.par_chunks_mut(ny).for_each_init(
            || vec![Complex64::new(0.0, 0.0); fwd.get_inplace_scratch_len()],
            |scratch, line| fwd.process_with_scratch(line, scratch),
        );
    }

    /// Inverse transform, normalised so that `inverse(forward(u)) == u`.
    pub fn inverse(&mut self, spec: &Spectrum, out: &mut [f64]) {
        let (nx, ny, nxh) = (self.nx, self.ny, self.nx / 2 + 1);
        assert_eq!(out.len(), nx * ny);
        assert_eq!((spec.nx, spec.ny), (nx, ny));
        self.cols.copy_from_slice(&spec.data);
        let inv = &self.inv_y;
        self.cols.par_chunks_mut(ny).for_each_init(
            || vec![Complex64::new(0.0, 0.0); inv.get_inplace_scratch_len()],
            |scratch, line| inv.process_with_scratch(line, scratch),
        );
        transpose(&self.cols, &mut self.rows, nxh, ny);
        let c2r = &self.c2r;
        let norm = 1.0 / (nx * ny) as f64;
        self.rows
            .par_chunks_mut(nxh)
            .zip(out.par_chunks_mut(nx))
            .for_each_init(
                || c2r.make_scratch_vec(),
                |scratch, (row, orow)| {
                    // a real signal has real DC and Nyquist bins
                    row[0].im = 0.0;
                    row[nxh - 1].im = 0.0;
                    c2r.process_with_scratch(row, orow, scratch)
                        .expect("buffer sizes match the plan");
                    for v in orow.iter_mut() {
                        *v *= norm;
                    }
                },
            );
    }
}

/// `dst[c][r] = src[r][c]` for a `rows × cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validation::oracle::brute_force_dft;

    fn sample(nx: usize, ny: usize) -> Vec<f64> {
        (0..nx * ny)
            .map(|n| {
                let (i, j) = ((n % nx) as f64, (n / nx) as f64);
                (0.3 * i).sin() + (0.7 * j + 0.1 * i * j).cos() + 0.01 * i
            })
            .collect()
    }

    #[test]
    fn matches_direct_dft() {
        let (nx, ny) = (16, 32);
        let u = sample(nx, ny);
        let mut fft = Fft2::new(nx, ny);
        let mut spec = Spectrum::zeros(nx, ny);
        fft.forward(&u, &mut spec);
        let direct = brute_force_dft(&u, nx, ny);
        for ix in 0..nx {
            for iy in 0..ny {
                let d = spec.full(ix, iy) - direct[iy * nx + ix];
                assert!(d.norm() < 1e-11, "({ix},{iy}) {d}");
            }
        }
    }

    #[test]
    fn round_trip() {
        let (nx, ny) = (64, 16);
        let u = sample(nx, ny);
        let mut fft = Fft2::new(nx, ny);
        let mut spec = Spectrum::zeros(nx, ny);
        fft.forward(&u, &mut spec);
        let mut back = vec![0.0; nx * ny];
        fft.inverse(&spec, &mut back);
        for (a, b) in u.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn symmetrize_projects_kx0_line() {
        let mut s = Spectrum::zeros(16, 16);
        s.set(0, 1, Complex64::new(1.0, 2.0));
        s.set(0, 0, Complex64::new(3.0, 1.0));
        s.symmetrize();
        assert_eq!(s.get(0, 1), Complex64::new(0.5, 1.0));
        assert_eq!(s.get(0, 15), Complex64::new(0.5, -1.0));
        assert_eq!(s.get(0, 0), Complex64::new(3.0, 0.0));
    }
}
