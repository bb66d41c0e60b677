//! Coorbit norms: a norm of the voice transform in a function space on the group.

use crate::error::{CoorbitError, Result};
use crate::group_core::grid::{Chart, GridFunction, HaarGrid};
use crate::group_core::quad::{lp_norm, mixed_norm};
use crate::kernels::{bergman_norm, voice_discrete_series_at, voice_wavelet, Spectrum, WaveletSpec};
use num_complex::Complex64;
use std::sync::Arc;

/// Exponents of `L^{p,q}_s`; with `q = p` and `s = 0` this is `L^p(G)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: f64,
    pub q: f64,
    pub s: f64,
}

impl NormSpec {
    pub fn new(p: f64, q: f64, s: f64) -> Result<Self> {
        if !(p >= 1.0 && q >= 1.0) || !s.is_finite() {
            return Err(CoorbitError::InvalidParameter(format!("need p, q >= 1 and finite s, got ({p}, {q}, {s})")));
        }
        Ok(NormSpec { p, q, s })
    }

    pub fn lp(p: f64) -> Result<Self> {
        NormSpec::new(p, p, 0.0)
    }

    /// Evaluates the norm of a grid function. `L^p` is used when `p = q` and `s = 0`.
    pub fn apply(&self, f: &GridFunction) -> Result<f64> {
        if self.p == self.q && self.s == 0.0 {
            lp_norm(f, self.p)
        } else {
            mixed_norm(f, self.p, self.q, self.s)
        }
    }
}

/// Holomorphic polynomial `sum_k c_k z^k` on the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVector {
    pub coeffs: Vec<Complex64>,
}

impl PolyVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(CoorbitError::InvalidParameter("polynomial needs finite coefficients".into()));
        }
        Ok(PolyVector { coeffs })
    }
}

/// Discrete-series voice transform of a polynomial on a matrix-chart grid.
pub fn voice_discrete_series_grid(phi: &PolyVector, n: u32, grid: &Arc<HaarGrid>) -> Result<GridFunction> {
    if n < 2 {
        return Err(CoorbitError::InvalidParameter(format!("discrete-series parameter n must be >= 2, got {n}")));
    }
    if grid.chart() != Chart::Matrix {
        return Err(CoorbitError::InvalidGrid("discrete-series transforms use the matrix chart".into()));
    }
    let f = grid.sample_chart(|a, b| voice_discrete_series_at(&phi.coeffs, n, a, b));
    f.check_finite("discrete-series voice transform")?;
    Ok(f)
}

/// `||V(phi)||_Y` for the weight-`n` discrete series.
pub fn coorbit_norm_poly(phi: &PolyVector, n: u32, y: &NormSpec, grid: &Arc<HaarGrid>) -> Result<f64> {
    y.apply(&voice_discrete_series_grid(phi, n, grid)?)
}

/// `||V_u v||_Y` for the wavelet representation.
pub fn coorbit_norm_wavelet<S: Spectrum + ?Sized>(
    v: &S,
    u: &WaveletSpec,
    y: &NormSpec,
    grid: &Arc<HaarGrid>,
) -> Result<f64> {
    y.apply(&voice_wavelet(u, v, grid)?)
}

/// Coorbit `L^p` norm of a polynomial next to its weighted Bergman norm
/// `( int |phi|^p (1 - |z|^2)^{p n / 2 - 2} )^{1/p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergmanComparison {
    pub coorbit: f64,
    pub bergman: f64,
    pub ratio: f64,
}

pub fn bergman_compare(phi: &PolyVector, n: u32, p: f64, grid: &Arc<HaarGrid>) -> Result<BergmanComparison> {
    let coorbit = coorbit_norm_poly(phi, n, &NormSpec::lp(p)?, grid)?;
    let bergman = bergman_norm(&phi.coeffs, n, p)?;
    Ok(BergmanComparison { coorbit, bergman, ratio: coorbit / bergman })
}
