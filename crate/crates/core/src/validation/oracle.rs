//! Direct discrete Fourier sums, kept free of the FFT code they check.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::material::EquationSpec;
use crate::spectral::{nonlinear_coefficient, two_thirds_keeps, Dealias, Field2D, SpectralGrid};

/// `Σ u[j][i] exp(-2πi (ix i/nx + iy j/ny))`, full layout indexed `iy·nx + ix`.
pub fn brute_force_dft(u: &[f64], nx: usize, ny: usize) -> Vec<Complex64> {
    assert_eq!(u.len(), nx * ny);
    let mut out = vec![Complex64::new(0.0, 0.0); nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..ny {
                for i in 0..nx {
                    // reduce the phase index first to keep the angle small
                    let p = ((ix * i) % nx) as f64 / nx as f64 + ((iy * j) % ny) as f64 / ny as f64;
                    acc += u[j * nx + i] * Complex64::from_polar(1.0, -2.0 * PI * p);
                }
            }
            out[iy * nx + ix] = acc;
        }
    }
    out
}

/// `n i kx DFT(U^p)` by direct summation, full layout indexed `iy·nx + ix`.
/// The `kx` Nyquist column is zero.
pub fn nonlinear_term_direct(spec: &EquationSpec, field: &Field2D, grid: &SpectralGrid, dealias: Dealias) -> Vec<Complex64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let p = spec.kind().power();
    let powered: Vec<f64> = field.values().iter().map(|v| v.powi(p)).collect();
    let mut out = brute_force_dft(&powered, nx, ny);
    let n = nonlinear_coefficient(spec.kind(), spec.branch());
    for iy in 0..ny {
        for ix in 0..nx {
            let keep = ix != nx / 2
                && match dealias {
                    Dealias::Off => true,
                    Dealias::TwoThirds => two_thirds_keeps(ix, iy, nx, ny),
                };
            let m = if keep { Complex64::new(0.0, n * grid.kx()[ix]) } else { Complex64::new(0.0, 0.0) };
            out[iy * nx + ix] *= m;
        }
    }
    out
}
