//! Fixed test signals and polynomials used by the experiments.

use coorbit_core::kernels::Spectrum;
use coorbit_core::transform_engine::PolyVector;
use coorbit_core::{Complex64, Result};

/// Real signal with two Gaussian spectral bumps at `+-center`, delayed by `shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center: f64,
    pub width: f64,
    pub shift: f64,
}

impl Spectrum for GaussianPacket {
    fn spectrum(&self, xi: f64) -> Result<Complex64> {
        let g = |d: f64| (-0.5 * (d / self.width).powi(2)).exp();
        Ok(Complex64::from_polar(g(xi - self.center) + g(xi + self.center), -xi * self.shift))
    }
}

/// Signals whose transforms the reproducing formula is checked on.
pub fn reproducing_signals() -> [GaussianPacket; 3] {
    [
        GaussianPacket { center: 1.5, width: 0.3, shift: 2.0 },
        GaussianPacket { center: 0.8, width: 0.15, shift: -5.0 },
        GaussianPacket { center: 3.0, width: 0.6, shift: 0.0 },
    ]
}

/// Ten packets spread over three octaves.
pub fn besov_family() -> Vec<GaussianPacket> {
    (0..10)
        .map(|k| {
            let center = 0.5 * 2f64.powf(k as f64 / 3.0);
            GaussianPacket { center, width: center / 5.0, shift: 1.5 * (k as f64 - 4.5) }
        })
        .collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Ten low-degree polynomials.
pub fn polynomial_family() -> Vec<(&'static str, PolyVector)> {
    let list: Vec<(&'static str, Vec<Complex64>)> = vec![
        ("1", vec![c(1.0, 0.0)]),
        ("z", vec![c(0.0, 0.0), c(1.0, 0.0)]),
        ("z^2", vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        ("1+z", vec![c(1.0, 0.0), c(1.0, 0.0)]),
        ("1-0.5z^2", vec![c(1.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]),
        ("(1+i)z+z^3", vec![c(0.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)]),
        ("0.3+0.7iz^2", vec![c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.7)]),
        ("z^4", vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        ("1+z+z^2+z^3", vec![c(1.0, 0.0); 4]),
        ("2-iz+0.5z^3", vec![c(2.0, 0.0), c(0.0, -1.0), c(0.0, 0.0), c(0.5, 0.0)]),
    ];
    list.into_iter().map(|(n, v)| (n, PolyVector::new(v).expect("nonempty coefficients"))).collect()
}

/// `sinc(pi R (x - 0.37/R) / 2) + 0.5 sinc(pi R (x - 2/R))`: band inside `|nu| <= R/2`.
pub fn shannon_target(r: f64, x: f64) -> f64 {
    use coorbit_core::gelfand_sampling::sinc;
    use std::f64::consts::PI;
    sinc(0.5 * PI * (r * x - 0.37)) + 0.5 * sinc(PI * (r * x - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packets_are_real_signals() {
        for p in besov_family() {
            let (a, b) = (p.spectrum(0.7).unwrap(), p.spectrum(-0.7).unwrap());
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn shannon_target_peaks() {
        assert!((shannon_target(2.0, 1.0) - (0.5f64 + (std::f64::consts::PI * 0.815).sin() / (std::f64::consts::PI * 0.815))).abs() < 1e-12);
        assert_eq!(polynomial_family().len(), 10);
    }
}
