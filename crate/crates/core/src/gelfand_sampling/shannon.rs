//! Bandlimited functions on the real line: the projection kernel, sampling
//! series and an FFT projection for periodic samples.

use crate::error::{CoorbitError, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// `sin(R pi x) / (pi x)`, equal to `R` at the origin: the kernel of the
/// projection onto functions with spectrum in `[-R/2, R/2]` (frequency in cycles).
pub fn sinc_kernel(r: f64, x: f64) -> f64 {
    let t = PI * x;
    if t.abs() < 1e-8 {
        // sin(R t) / t = R (1 - (R t)^2 / 6 + ...)
        return r * (1.0 - (r * t) * (r * t) / 6.0);
    }
    (r * t).sin() / t
}

/// `sin(t) / t` with value 1 at 0.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// Values of the sampling series at `x_eval` together with the size of the outermost terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ShannonResult {
    pub values: Vec<f64>,
    /// `max_x |f(-N/R) sinc(R pi x + N pi)| + |f(N/R) sinc(R pi x - N pi)|`, an indicator of truncation.
    pub edge_terms: f64,
}

/// `sum_{|n| <= N} f(n/R) sinc(R pi (x - n/R))` with `samples[i] = f((i - N)/R)`.
///
/// The unit-peak sinc makes the series interpolate: at `x = m/R` only the
/// term `n = m` survives.
pub fn shannon_reconstruct(samples: &[f64], r: f64, x_eval: &[f64]) -> Result<ShannonResult> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("sampling rate must be positive, got {r}")));
    }
    if samples.len() % 2 != 1 {
        return Err(CoorbitError::InvalidParameter("samples must be indexed symmetrically, -N..=N".into()));
    }
    let n = (samples.len() / 2) as i64;
    let mut edge = 0.0f64;
    let values = x_eval
        .iter()
        .map(|&x| {
            let u = r * x;
            // Exact at sample points.
            if (u - u.round()).abs() < 1e-13 && (u.round() as i64).abs() <= n {
                return samples[(u.round() as i64 + n) as usize];
            }
            // sin(pi (u - k)) = (-1)^k sin(pi u).
            let s = (PI * u).sin();
            let mut acc = crate::group_core::sum::CompensatedSum::new();
            for (i, &fv) in samples.iter().enumerate() {
                let k = i as i64 - n;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc.add(fv * sign * s / (PI * (u - k as f64)));
            }
            let e = samples[0].abs() * sinc(PI * (u + n as f64)).abs() + samples[samples.len() - 1].abs() * sinc(PI * (u - n as f64)).abs();
            edge = edge.max(e);
            acc.value()
        })
        .collect();
    Ok(ShannonResult { values, edge_terms: edge })
}

/// Projects periodic samples with spacing `dx` onto frequencies `|nu| <= R/2`
/// (cycles per unit) by zeroing DFT bins.
pub fn project_real_line(f: &[Complex64], dx: f64, r: f64) -> Result<Vec<Complex64>> {
    let n = f.len();
    if n == 0 || !(dx > 0.0) || !(r > 0.0) {
        return Err(CoorbitError::InvalidParameter("need samples, dx > 0 and R > 0".into()));
    }
    let mut planner = FftPlanner::new();
    let mut buf = f.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let period = n as f64 * dx;
    for (k, z) in buf.iter_mut().enumerate() {
        let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        let nu = kk / period;
        if nu.abs() > 0.5 * r * (1.0 + 1e-12) {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(buf.into_iter().map(|z| z / n as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        assert_eq!(sinc_kernel(2.0, 0.0), 2.0);
        for n in 1..20 {
            assert!(sinc_kernel(2.5, n as f64 / 2.5).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolates_samples() {
        let r = 2.0;
        let samples: Vec<f64> = (-50..=50).map(|n| (0.3 * n as f64).cos()).collect();
        let xs: Vec<f64> = (-50..=50).map(|n| n as f64 / r).collect();
        let out = shannon_reconstruct(&samples, r, &xs).unwrap();
        assert_eq!(out.values, samples);
    }

    #[test]
    fn single_sinc_reproduced() {
        let r = 1.5;
        let samples: Vec<f64> = (-30..=30).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect();
        let xs = [0.123, -2.7, 5.05];
        let out = shannon_reconstruct(&samples, r, &xs).unwrap();
        for (x, v) in xs.iter().zip(&out.values) {
            assert!((v - sinc(r * PI * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn real_line_projection_fixes_band() {
        let n = 256;
        let dx = 0.1;
        let period = n as f64 * dx;
        let f: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = j as f64 * dx;
                Complex64::from_polar(1.0, 2.0 * PI * 3.0 / period * x) + Complex64::new((2.0 * PI * 10.0 / period * x).cos(), 0.0)
            })
            .collect();
        // Band |nu| <= 0.5 keeps both tones (3/25.6 and 10/25.6 cycles per unit).
        let p = project_real_line(&f, dx, 1.0).unwrap();
        assert!(p.iter().zip(&f).all(|(a, b)| (a - b).norm() < 1e-12));
        // A narrower band removes the second tone.
        let q = project_real_line(&f, dx, 0.5).unwrap();
        let qq = project_real_line(&q, dx, 0.5).unwrap();
        assert!(q.iter().zip(&qq).all(|(a, b)| (a - b).norm() < 1e-12));
        assert!(q.iter().zip(&f).any(|(a, b)| (a - b).norm() > 0.1));
    }
}
