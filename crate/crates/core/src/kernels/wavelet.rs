//! Wavelet voice transforms on the full affine group.
//!
//! Fourier convention: `v^(xi) = int v(t) e^{-i xi t} dt`, so the translated and
//! dilated wavelet `|A|^{-1/2} u((t - B)/A)` has transform
//! `|A|^{1/2} e^{-i B xi} u^(A xi)`. The voice transform is
//! `V_w v(A, B) = <v, pi(A, B) w> = (2 pi)^{-1} int v^(xi) conj(|A|^{1/2} e^{-i B xi} w^(A xi)) dxi`.
//! All frequency integrals are taken over the wavelet band in the variable
//! `eta = A xi`, so the nodes do not depend on the group element.

use crate::error::{CoorbitError, Result};
use crate::group_core::derivative::Generator;
use crate::group_core::grid::{GridFunction, HaarGrid};
use crate::group_core::sum::CompensatedSum;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Band-limited mother wavelet with an even, real, smooth bump spectrum
/// supported on `xi1 <= |xi| <= xi2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletSpec {
    pub xi1: f64,
    pub xi2: f64,
    /// Exponent `k` of the bump `exp(-1 / (1 - tau^2)^k)`.
    pub smoothness: f64,
    /// Minimum number of frequency nodes per half band.
    pub n_xi: usize,
    scale: f64,
}

impl WaveletSpec {
    /// Builds the wavelet and scales it so that `int |u^(xi)|^2 / |xi| dxi = 1` over the line.
    pub fn new(xi1: f64, xi2: f64, smoothness: f64, n_xi: usize) -> Result<WaveletSpec> {
        if !(xi1 > 0.0 && xi2 > xi1 && xi2.is_finite()) {
            return Err(CoorbitError::InvalidParameter(format!("wavelet band must satisfy 0 < xi1 < xi2, got [{xi1}, {xi2}]")));
        }
        if !(smoothness > 0.0) || n_xi < 8 {
            return Err(CoorbitError::InvalidParameter("wavelet needs smoothness > 0 and at least 8 nodes".into()));
        }
        let mut w = WaveletSpec { xi1, xi2, smoothness, n_xi, scale: 1.0 };
        let adm = w.admissibility();
        w.scale = 1.0 / adm.sqrt();
        Ok(w)
    }

    /// Band `[1, 2]`, unit smoothness, 256 nodes.
    pub fn standard() -> WaveletSpec {
        WaveletSpec::new(1.0, 2.0, 1.0, 256).expect("standard wavelet")
    }

    #[inline]
    fn tau(&self, eta: f64) -> f64 {
        (2.0 * eta.abs() - self.xi1 - self.xi2) / (self.xi2 - self.xi1)
    }

    /// `u^(xi)`.
    #[inline]
    pub fn uhat(&self, xi: f64) -> f64 {
        let t = self.tau(xi);
        if t.abs() >= 1.0 {
            return 0.0;
        }
        self.scale * (-(1.0 - t * t).powf(-self.smoothness)).exp()
    }

    /// `d u^ / d xi`.
    #[inline]
    pub fn uhat_prime(&self, xi: f64) -> f64 {
        let t = self.tau(xi);
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let k = self.smoothness;
        let one = 1.0 - t * t;
        let dphi_dt = -2.0 * k * t * one.powf(-k - 1.0);
        let dt_dxi = 2.0 * xi.signum() / (self.xi2 - self.xi1);
        self.uhat(xi) * dphi_dt * dt_dxi
    }

    /// Transform of the analyzing vector `w` at `xi`.
    #[inline]
    pub fn analyzer_hat(&self, which: Analyzer, xi: f64) -> Complex64 {
        match which {
            Analyzer::Mother => Complex64::new(self.uhat(xi), 0.0),
            // d/ds of |e^s|^{1/2} u^(e^s xi) at s = 0.
            Analyzer::Derivative(Generator::X1) => Complex64::new(0.5 * self.uhat(xi) + xi * self.uhat_prime(xi), 0.0),
            // d/ds of e^{-i s xi} u^(xi) at s = 0.
            Analyzer::Derivative(Generator::X2) => Complex64::new(0.0, -xi * self.uhat(xi)),
        }
    }

    /// Trapezoid nodes on `[xi1, xi2]` with at least `n` intervals.
    fn half_band_rule(&self, n: usize) -> (Vec<f64>, f64) {
        let h = (self.xi2 - self.xi1) / n as f64;
        // The integrands vanish to all orders at both ends; endpoints carry zero weight.
        ((1..n).map(|j| self.xi1 + j as f64 * h).collect(), h)
    }

    /// Node count that keeps the trapezoid rule free of aliasing for phases up to `omega`.
    fn nodes_for(&self, omega: f64) -> usize {
        self.n_xi + ((self.xi2 - self.xi1) * omega.abs() / PI).ceil() as usize
    }

    /// `int |u^(xi)|^2 / |xi| dxi` over the line.
    pub fn admissibility(&self) -> f64 {
        let (nodes, h) = self.half_band_rule(4 * self.n_xi);
        let mut acc = CompensatedSum::new();
        for x in nodes {
            acc.add(self.uhat(x).powi(2) / x);
        }
        2.0 * h * acc.value()
    }

    /// `||u||_2^2 = (2 pi)^{-1} int |u^|^2`.
    pub fn l2_norm_sqr(&self) -> f64 {
        let (nodes, h) = self.half_band_rule(4 * self.n_xi);
        2.0 * h * nodes.iter().map(|&x| self.uhat(x).powi(2)).sum::<f64>() / (2.0 * PI)
    }

    /// Mother wavelet in time, `u(t) = pi^{-1} int_{xi1}^{xi2} u^(xi) cos(xi t) dxi`.
    pub fn u_time(&self, t: f64) -> f64 {
        let (nodes, h) = self.half_band_rule(self.nodes_for(t));
        h * nodes.iter().map(|&x| self.uhat(x) * (x * t).cos()).sum::<f64>() / PI
    }

    /// Range of `|A|` outside which `V_w u(A, .)` vanishes.
    pub fn dilation_support(&self) -> (f64, f64) {
        (self.xi1 / self.xi2, self.xi2 / self.xi1)
    }
}

/// Analyzing vector of a wavelet voice transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analyzer {
    /// The mother wavelet `u`.
    Mother,
    /// `d pi(X) u`, the derivative of the representation applied to `u`.
    Derivative(Generator),
}

/// A signal known through its Fourier transform.
pub trait Spectrum: Sync {
    fn spectrum(&self, xi: f64) -> Result<Complex64>;
}

impl Spectrum for WaveletSpec {
    fn spectrum(&self, xi: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.uhat(xi), 0.0))
    }
}

/// Spectrum given by a closure.
pub struct AnalyticSpectrum<F: Fn(f64) -> Complex64 + Sync>(pub F);

impl<F: Fn(f64) -> Complex64 + Sync> Spectrum for AnalyticSpectrum<F> {
    fn spectrum(&self, xi: f64) -> Result<Complex64> {
        Ok((self.0)(xi))
    }
}

/// Uniform time samples `v(t0 + j dt)`; the spectrum is the Riemann sum of the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<Complex64>,
}

impl Spectrum for TimeSignal {
    fn spectrum(&self, xi: f64) -> Result<Complex64> {
        let step = Complex64::from_polar(1.0, -xi * self.dt);
        let mut ph = Complex64::from_polar(self.dt, -xi * self.t0);
        let mut acc = Complex64::new(0.0, 0.0);
        for v in &self.values {
            acc += v * ph;
            ph *= step;
        }
        Ok(acc)
    }
}

/// Tabulated spectrum with linear interpolation on sorted frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl FrequencyTable {
    pub fn new(xi: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if xi.len() != values.len() || xi.len() < 2 || xi.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CoorbitError::InvalidParameter("frequency table needs >= 2 strictly increasing nodes".into()));
        }
        Ok(FrequencyTable { xi, values })
    }
}

impl Spectrum for FrequencyTable {
    fn spectrum(&self, xi: f64) -> Result<Complex64> {
        let n = self.xi.len();
        if xi < self.xi[0] || xi > self.xi[n - 1] {
            return Err(CoorbitError::UnresolvedFrequency(xi));
        }
        let j = self.xi.partition_point(|&x| x <= xi).clamp(1, n - 1);
        let (x0, x1) = (self.xi[j - 1], self.xi[j]);
        let f = (xi - x0) / (x1 - x0);
        Ok(self.values[j - 1] * (1.0 - f) + self.values[j] * f)
    }
}

/// Spectrum of `pi(g) v` for a spectrum `v` and `g = (A, B)`:
/// `|A|^{1/2} e^{-i B xi} v^(A xi)`.
pub struct TranslatedSpectrum<'a, S: Spectrum + ?Sized> {
    pub inner: &'a S,
    pub a: f64,
    pub b: f64,
}

impl<S: Spectrum + ?Sized> Spectrum for TranslatedSpectrum<'_, S> {
    fn spectrum(&self, xi: f64) -> Result<Complex64> {
        Ok(self.inner.spectrum(self.a * xi)? * Complex64::from_polar(self.a.abs().sqrt(), -self.b * xi))
    }
}

/// Per-row frequency data: `c_j = h v^(eta_j / A) conj(w^(eta_j)) / (2 pi |A|^{1/2})`
/// and phases `eta_j / A`, over both half bands.
fn row_coefficients<S: Spectrum + ?Sized>(
    spec: &WaveletSpec,
    which: Analyzer,
    v: &S,
    a: f64,
    omega_max: f64,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let (nodes, h) = spec.half_band_rule(spec.nodes_for(omega_max));
    let pre = h / (2.0 * PI * a.abs().sqrt());
    let mut coeffs = Vec::with_capacity(2 * nodes.len());
    let mut freqs = Vec::with_capacity(2 * nodes.len());
    for sgn in [-1.0, 1.0] {
        for &e in &nodes {
            let eta = sgn * e;
            let w = spec.analyzer_hat(which, eta);
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let vv = v.spectrum(eta / a)?;
            coeffs.push(vv * w.conj() * pre);
            freqs.push(eta / a);
        }
    }
    Ok((coeffs, freqs))
}

/// `V_w v(A, B)` at one affine element.
pub fn voice_wavelet_at<S: Spectrum + ?Sized>(
    spec: &WaveletSpec,
    which: Analyzer,
    v: &S,
    a: f64,
    b: f64,
) -> Result<Complex64> {
    if a == 0.0 || !a.is_finite() {
        return Err(CoorbitError::ZeroDilation(a));
    }
    let (c, f) = row_coefficients(spec, which, v, a, b / a)?;
    Ok(c.iter().zip(&f).map(|(c, f)| c * Complex64::from_polar(1.0, b * f)).sum())
}

/// Wavelet voice transform `V_u v` on every node of an affine-chart grid.
pub fn voice_wavelet<S: Spectrum + ?Sized>(spec: &WaveletSpec, v: &S, grid: &Arc<HaarGrid>) -> Result<GridFunction> {
    voice_wavelet_with(spec, Analyzer::Mother, v, grid)
}

/// Voice transform against an arbitrary analyzing vector on a grid.
pub fn voice_wavelet_with<S: Spectrum + ?Sized>(
    spec: &WaveletSpec,
    which: Analyzer,
    v: &S,
    grid: &Arc<HaarGrid>,
) -> Result<GridFunction> {
    use rayon::prelude::*;
    if grid.chart() != crate::group_core::grid::Chart::Affine {
        return Err(CoorbitError::InvalidGrid("wavelet transforms use the affine chart".into()));
    }
    let na = grid.n_a();
    let rows: Vec<(usize, usize)> = (0..grid.n_sheets()).flat_map(|s| (0..na).map(move |i| (s, i))).collect();
    let b_max = grid.spec().b_max;
    let blocks: Vec<Result<Vec<Complex64>>> = rows
        .par_iter()
        .map(|&(s, i)| {
            let a = grid.sheet_sign(s) * grid.a_nodes()[i];
            let (c, f) = row_coefficients(spec, which, v, a, b_max / a)?;
            Ok(grid
                .b_nodes()
                .iter()
                .map(|&b| c.iter().zip(&f).map(|(c, f)| c * Complex64::from_polar(1.0, b * f)).sum())
                .collect())
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for blk in blocks {
        values.extend(blk?);
    }
    let out = GridFunction { grid: Arc::clone(grid), values };
    out.check_finite("wavelet voice transform")?;
    Ok(out)
}

/// Kernel `V_w u(A, B) = <u, pi(A, B) w>` at one point.
pub fn wavelet_kernel_at(spec: &WaveletSpec, which: Analyzer, a: f64, b: f64) -> Complex64 {
    voice_wavelet_at(spec, which, spec, a, b).unwrap_or(Complex64::new(0.0, 0.0))
}

/// Fills `out[j] = V_w u(s, t0 + j dt)` for one dilation `s`.
pub fn wavelet_kernel_row(spec: &WaveletSpec, which: Analyzer, s: f64, t0: f64, dt: f64, out: &mut [Complex64]) {
    let zero = Complex64::new(0.0, 0.0);
    let (lo, hi) = spec.dilation_support();
    if !(s.abs() > lo && s.abs() < hi) {
        out.iter_mut().for_each(|z| *z = zero);
        return;
    }
    let t_end = t0 + dt * out.len().saturating_sub(1) as f64;
    let omega = t0.abs().max(t_end.abs()) / s;
    let (c, f) = match row_coefficients(spec, which, spec, s, omega) {
        Ok(x) => x,
        Err(_) => {
            out.iter_mut().for_each(|z| *z = zero);
            return;
        }
    };
    let mut ph: Vec<Complex64> = c.iter().zip(&f).map(|(c, f)| c * Complex64::from_polar(1.0, t0 * f)).collect();
    let step: Vec<Complex64> = f.iter().map(|f| Complex64::from_polar(1.0, dt * f)).collect();
    for (j, o) in out.iter_mut().enumerate() {
        if j % 64 == 0 && j > 0 {
            // Refresh phases to keep the recurrence from drifting.
            let t = t0 + dt * j as f64;
            for ((p, c), f) in ph.iter_mut().zip(&c).zip(&f) {
                *p = c * Complex64::from_polar(1.0, t * f);
            }
        }
        *o = ph.iter().sum();
        for (p, st) in ph.iter_mut().zip(&step) {
            *p *= st;
        }
    }
}
