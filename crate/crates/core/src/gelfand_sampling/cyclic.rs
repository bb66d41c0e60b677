//! Bandlimited functions on the cyclic group `Z_N` and exact recovery from a
//! subgroup when the band tiles the dual group.

use crate::error::{CoorbitError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Validated band `Omega` inside `{0, ..., N-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicBand {
    pub n: usize,
    pub omega: Vec<usize>,
}

impl CyclicBand {
    pub fn new(n: usize, mut omega: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(CoorbitError::InvalidParameter("cyclic group needs N >= 1".into()));
        }
        omega.sort_unstable();
        omega.dedup();
        if omega.is_empty() {
            return Err(CoorbitError::InvalidParameter("empty band".into()));
        }
        if let Some(&k) = omega.iter().find(|&&k| k >= n) {
            return Err(CoorbitError::InvalidParameter(format!("band index {k} is not below N = {n}")));
        }
        Ok(CyclicBand { n, omega })
    }

    /// Dual measure of the band, `|Omega| / N`.
    pub fn measure(&self) -> f64 {
        self.omega.len() as f64 / self.n as f64
    }
}

fn character(n: usize, k: usize, x: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((k * x) % n) as f64 / n as f64)
}

/// `psi(x) = N^{-1} sum_{k in Omega} e^{-2 pi i k x / N}`.
pub fn cyclic_kernel(band: &CyclicBand) -> Vec<Complex64> {
    let n = band.n;
    (0..n).map(|x| band.omega.iter().map(|&k| character(n, k, x).conj()).sum::<Complex64>() / n as f64).collect()
}

/// `(f * g)(x) = sum_y f(y) g(x - y)`.
pub fn cyclic_convolve(f: &[Complex64], g: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = f.len();
    if g.len() != n || n == 0 {
        return Err(CoorbitError::InvalidParameter("cyclic convolution needs equal nonempty lengths".into()));
    }
    Ok((0..n).map(|x| (0..n).map(|y| f[y] * g[(x + n - y) % n]).sum()).collect())
}

/// `f * psi`.
pub fn cyclic_project(f: &[Complex64], band: &CyclicBand) -> Result<Vec<Complex64>> {
    if f.len() != band.n {
        return Err(CoorbitError::InvalidParameter(format!("signal length {} differs from N = {}", f.len(), band.n)));
    }
    cyclic_convolve(f, &cyclic_kernel(band))
}

/// An element of the band's span with the given coefficients on `e^{-2 pi i k x / N}`.
pub fn cyclic_bandlimited(band: &CyclicBand, coeffs: &[Complex64]) -> Vec<Complex64> {
    (0..band.n)
        .map(|x| band.omega.iter().zip(coeffs).map(|(&k, c)| c * character(band.n, k, x).conj()).sum())
        .collect()
}

/// How `Omega + M Z_N` covers `Z_N`: `Ok` when every class is hit exactly once.
pub fn check_tiling(band: &CyclicBand, m: usize) -> Result<()> {
    let n = band.n;
    if m == 0 || n % m != 0 {
        return Err(CoorbitError::InvalidParameter(format!("M = {m} does not divide N = {n}")));
    }
    let mut hits = vec![0usize; n];
    for &k in &band.omega {
        for t in 0..n / m {
            hits[(k + m * t) % n] += 1;
        }
    }
    let gaps = hits.iter().filter(|&&h| h == 0).count();
    let overlaps = hits.iter().filter(|&&h| h > 1).count();
    if gaps > 0 || overlaps > 0 {
        return Err(CoorbitError::InvalidParameter(format!(
            "band does not tile: {gaps} uncovered and {overlaps} multiply covered classes"
        )));
    }
    Ok(())
}

/// Outcome of recovering a signal from its samples on `L Z_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicRecovery {
    pub estimate: Vec<Complex64>,
    /// Sample positions `0, L, 2L, ...`.
    pub sample_points: Vec<usize>,
    /// `max |estimate - f|`.
    pub residual: f64,
    /// Whether `Omega` tiles with `M Z_N`; without tiling the residual is reported, not guaranteed.
    pub tiles: bool,
}

/// `f(y) ~ L sum_{x in L Z_N} f(x) psi(y - x)` with `N = L M`.
pub fn cyclic_sample_reconstruct(f: &[Complex64], band: &CyclicBand, m: usize) -> Result<CyclicRecovery> {
    let n = band.n;
    if f.len() != n {
        return Err(CoorbitError::InvalidParameter(format!("signal length {} differs from N = {n}", f.len())));
    }
    if m == 0 || n % m != 0 {
        return Err(CoorbitError::InvalidParameter(format!("M = {m} does not divide N = {n}")));
    }
    let l = n / m;
    let tiles = check_tiling(band, m).is_ok();
    let psi = cyclic_kernel(band);
    let sample_points: Vec<usize> = (0..m).map(|t| t * l).collect();
    let estimate: Vec<Complex64> = (0..n)
        .map(|y| sample_points.iter().map(|&x| f[x] * psi[(y + n - x) % n]).sum::<Complex64>() * l as f64)
        .collect();
    let residual = estimate.iter().zip(f).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(CyclicRecovery { estimate, sample_points, residual, tiles })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_examples() {
        let full = cyclic_kernel(&CyclicBand::new(8, (0..8).collect()).unwrap());
        assert!((full[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(full[1..].iter().all(|z| z.norm() < 1e-14));
        let dc = cyclic_kernel(&CyclicBand::new(8, vec![0]).unwrap());
        assert!(dc.iter().all(|z| (z - c(0.125, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn kernel_is_idempotent() {
        let band = CyclicBand::new(12, vec![0, 1, 2, 3]).unwrap();
        let psi = cyclic_kernel(&band);
        let pp = cyclic_convolve(&psi, &psi).unwrap();
        for (a, b) in pp.iter().zip(&psi) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn tiling_checks() {
        let band = CyclicBand::new(12, vec![0, 1, 2, 3]).unwrap();
        assert!(check_tiling(&band, 4).is_ok());
        assert!(check_tiling(&CyclicBand::new(12, vec![0, 1, 2, 4]).unwrap(), 4).is_err());
        assert!(check_tiling(&band, 5).is_err());
    }

    #[test]
    fn kernel_recovers_itself() {
        let band = CyclicBand::new(12, vec![0, 1, 2, 3]).unwrap();
        let psi = cyclic_kernel(&band);
        let r = cyclic_sample_reconstruct(&psi, &band, 4).unwrap();
        assert!(r.tiles && r.residual < 1e-15);
        assert_eq!(r.sample_points, vec![0, 3, 6, 9]);
    }
}
