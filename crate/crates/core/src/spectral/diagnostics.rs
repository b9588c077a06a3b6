use super::Field2D;

/// Location of the largest sample, refined along `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Peak {
    /// Constant field; no maximum to locate.
    Flat,
    At { x: f64, y: f64, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub mean: f64,
    /// `sqrt(Σ u² Δx Δy)`.
    pub l2_norm: f64,
    pub min: f64,
    pub max: f64,
    pub peak: Peak,
}

pub fn diagnostics(field: &Field2D) -> Diagnostics {
    let values = field.values();
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let sum_sq = compensated_sum(values.iter().map(|v| v * v));
    let l2_norm = (sum_sq * field.dx() * field.dy()).sqrt();
    let (mut min, mut max, mut arg) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for (k, &v) in values.iter().enumerate() {
        if v < min {
            min = v;
        }
        if v > max {
            max = v;
            arg = k;
        }
    }
    let peak = if max == min { Peak::Flat } else { refine_peak(field, arg) };
    Diagnostics { mean, l2_norm, min, max, peak }
}

/// Neumaier summation; a plain running sum over a 256² grid loses about
/// 1e-13 relative, which is the size of the drifts being monitored.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Three-point parabola through the maximum and its periodic `x` neighbours.
fn refine_peak(field: &Field2D, arg: usize) -> Peak {
    let nx = field.nx();
    let (i, j) = (arg % nx, arg / nx);
    let row = field.row(j);
    let (ym, y0, yp) = (row[(i + nx - 1) % nx], row[i], row[(i + 1) % nx]);
    let curvature = ym - 2.0 * y0 + yp;
    let (offset, value) = if curvature < 0.0 {
        let off = 0.5 * (ym - yp) / curvature;
        (off, y0 - 0.25 * (ym - yp) * off)
    } else {
        (0.0, y0)
    };
    let d = field.domain();
    let mut x = field.x(i) + offset * field.dx();
    if x < d.x_min {
        x += d.lx();
    } else if x >= d.x_max {
        x -= d.lx();
    }
    Peak::At { x, y: field.y(j), value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, Domain};
    use std::f64::consts::PI;

    #[test]
    fn zero_field_is_flat() {
        let g = make_grid(16, 16, Domain::centered(PI, PI)).unwrap();
        let d = diagnostics(&Field2D::zeros(&g));
        assert_eq!((d.mean, d.l2_norm, d.min, d.max), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(d.peak, Peak::Flat);
    }

    #[test]
    fn soliton_peak_at_origin() {
        let g = make_grid(256, 256, Domain::centered(4.0 * PI, 4.0 * PI)).unwrap();
        let f = Field2D::from_fn(&g, |x, _| 2.0 / x.cosh().powi(2));
        let d = diagnostics(&f);
        assert_eq!(d.max, 2.0);
        match d.peak {
            Peak::At { x, value, .. } => {
                assert!(x.abs() < 1e-12);
                assert!((value - 2.0).abs() < 1e-12);
            }
            Peak::Flat => panic!("flat"),
        }
    }

    #[test]
    fn sine_has_zero_mean() {
        let g = make_grid(64, 16, Domain::centered(PI, PI)).unwrap();
        let d = diagnostics(&Field2D::from_fn(&g, |x, _| x.sin()));
        assert!(d.mean.abs() < 1e-14);
        // ∫∫ sin² = 2π·π
        assert!((d.l2_norm - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(v.iter().sum::<f64>(), 1.0);
        assert_eq!(compensated_sum(v.into_iter()), 2.0);
    }

    #[test]
    fn parabolic_refinement_finds_subgrid_peak() {
        let g = make_grid(128, 16, Domain::centered(8.0, 1.0)).unwrap();
        let center = 0.37 * g.dx();
        let f = Field2D::from_fn(&g, |x, _| 1.0 - (x - center).powi(2));
        match diagnostics(&f).peak {
            Peak::At { x, value, .. } => {
                assert!((x - center).abs() < 1e-12);
                assert!((value - 1.0).abs() < 1e-12);
            }
            Peak::Flat => panic!("flat"),
        }
    }
}
