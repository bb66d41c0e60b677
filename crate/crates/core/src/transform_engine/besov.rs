//! Besov norms of signals on the line, by dyadic Littlewood-Paley pieces and
//! through mixed norms of the wavelet voice transform.

use crate::error::{CoorbitError, Result};
use crate::group_core::grid::HaarGrid;
use crate::group_core::quad::mixed_norm;
use crate::group_core::sum::CompensatedSum;
use crate::kernels::{voice_wavelet, Spectrum, WaveletSpec};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::Arc;

/// Parameters of `B^s_{p,q}` and of the dyadic decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub j_min: i32,
    pub j_max: i32,
    /// Minimum period of the time grid used to evaluate each piece; the signal
    /// must be negligible outside an interval of this length.
    pub period: f64,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, q: f64, j_min: i32, j_max: i32, period: f64) -> Result<Self> {
        if !(p >= 1.0 && q >= 1.0) || !p.is_finite() || !q.is_finite() || !s.is_finite() {
            return Err(CoorbitError::InvalidParameter(format!("need finite p, q >= 1, got p={p}, q={q}")));
        }
        if j_min > j_max || !(period > 0.0) {
            return Err(CoorbitError::InvalidParameter("empty dyadic range or non-positive period".into()));
        }
        Ok(BesovSpec { s, p, q, j_min, j_max, period })
    }

    /// Exponent `s + 1/2 - 1/q` of the matching mixed norm on the group.
    pub fn group_exponent(&self) -> f64 {
        self.s + 0.5 - 1.0 / self.q
    }
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth cutoff: 1 for `|xi| <= 1`, 0 for `|xi| >= 2`.
pub fn lp_cutoff(xi: f64) -> f64 {
    let x = xi.abs();
    if x <= 1.0 {
        return 1.0;
    }
    if x >= 2.0 {
        return 0.0;
    }
    let (u, v) = (bump(2.0 - x), bump(x - 1.0));
    u / (u + v)
}

/// Dyadic window `phi(xi) = theta(xi) - theta(2 xi)`, supported in `1/2 <= |xi| <= 2`;
/// its dilates `phi(2^-j xi)` sum to one away from the origin.
pub fn lp_window(xi: f64) -> f64 {
    lp_cutoff(xi) - lp_cutoff(2.0 * xi)
}

/// `||F^{-1}(phi_j v^)||_{L^p}` on a periodic time grid.
fn piece_norm<S: Spectrum + ?Sized>(v: &S, j: i32, spec: &BesovSpec, planner: &mut FftPlanner<f64>) -> Result<f64> {
    let scale = 2f64.powi(j);
    // Low-frequency pieces spread over a time range of order 1 / scale.
    let period = spec.period.max(256.0 / scale);
    let dxi = 2.0 * PI / period;
    // Frequencies up to 2^(j+1) plus headroom; at least 256 points.
    let need = (2.0 * 2.0 * scale / dxi).ceil() as usize + 4;
    let n = need.next_power_of_two().max(256);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in buf.iter_mut().enumerate() {
        let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        let xi = kk * dxi;
        let w = lp_window(xi / scale);
        if w != 0.0 {
            *slot = v.spectrum(xi)? * (w * dxi / (2.0 * PI));
        }
    }
    // g(t_m) = sum_k c_k e^{i xi_k t_m} with t_m = m period / n.
    planner.plan_fft_inverse(n).process(&mut buf);
    let dt = period / n as f64;
    let mut acc = CompensatedSum::new();
    for z in &buf {
        acc.add(z.norm().powf(spec.p) * dt);
    }
    Ok(acc.value().powf(1.0 / spec.p))
}

/// `( sum_j 2^{s j q} ||F^{-1}(phi_j v^)||_p^q )^{1/q}` over the dyadic range.
pub fn besov_norm_lp<S: Spectrum + ?Sized>(v: &S, spec: &BesovSpec) -> Result<f64> {
    let mut planner = FftPlanner::new();
    let mut acc = CompensatedSum::new();
    for j in spec.j_min..=spec.j_max {
        let nj = piece_norm(v, j, spec, &mut planner)?;
        acc.add((2f64.powf(spec.s * j as f64) * nj).powf(spec.q));
    }
    let out = acc.value().powf(1.0 / spec.q);
    if !out.is_finite() {
        return Err(CoorbitError::NonFinite("Besov norm".into()));
    }
    Ok(out)
}

/// Fraction of `int |v^|^2` carried by frequencies outside the dyadic range,
/// estimated on the band `[2^(j_min - 3), 2^(j_max + 3)]`.
pub fn besov_tail_fraction<S: Spectrum + ?Sized>(v: &S, spec: &BesovSpec) -> Result<f64> {
    let lo = 2f64.powi(spec.j_min - 3);
    let hi = 2f64.powi(spec.j_max + 3);
    let n = 8192;
    let (mut inside, mut total) = (CompensatedSum::new(), CompensatedSum::new());
    for sgn in [-1.0, 1.0] {
        for k in 0..n {
            // Log-uniform midpoints; d xi = xi d(log xi).
            let l = lo.ln() + (k as f64 + 0.5) * (hi.ln() - lo.ln()) / n as f64;
            let xi = sgn * l.exp();
            let e = v.spectrum(xi)?.norm_sqr() * xi.abs();
            total.add(e);
            let covered: f64 = (spec.j_min..=spec.j_max).map(|j| lp_window(xi / 2f64.powi(j))).sum();
            inside.add(e * covered.min(1.0));
        }
    }
    let t = total.value();
    Ok(if t == 0.0 { 0.0 } else { 1.0 - inside.value() / t })
}

/// Besov norm through the group: the mixed norm of `V_u v` on an affine grid
/// with inner weight `|A|^{-p (s + 1/2 - 1/q)}`; the two sheets combine in `l^q`.
pub fn besov_norm_coorbit<S: Spectrum + ?Sized>(
    v: &S,
    u: &WaveletSpec,
    spec: &BesovSpec,
    grid: &Arc<HaarGrid>,
) -> Result<f64> {
    let w = voice_wavelet(u, v, grid)?;
    mixed_norm(&w, spec.p, spec.q, spec.p * spec.group_exponent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::AnalyticSpectrum;

    #[test]
    fn windows_partition_unity() {
        for &xi in &[0.013, 0.7, 1.0, 1.37, 5.0, -22.1, 300.0] {
            let s: f64 = (-20..=20).map(|j| lp_window(xi / 2f64.powi(j))).sum();
            assert!((s - 1.0).abs() < 1e-12, "{xi}");
        }
        assert_eq!(lp_window(0.49), 0.0);
        assert_eq!(lp_window(2.01), 0.0);
    }

    #[test]
    fn l2_pieces_follow_plancherel() {
        // Gaussian spectrum; with p = q = 2, s = 0 the sum of squared pieces is
        // (2 pi)^-1 int |v^|^2 sum_j phi_j^2.
        let v = AnalyticSpectrum(|xi: f64| Complex64::new((-(xi * xi) / 4.0).exp(), 0.0));
        let spec = BesovSpec::new(0.0, 2.0, 2.0, -6, 4, 64.0).unwrap();
        let got = besov_norm_lp(&v, &spec).unwrap().powi(2);
        let n = 200_000;
        let h = 40.0 / n as f64;
        let mut want = 0.0;
        for k in 0..n {
            let xi = -20.0 + (k as f64 + 0.5) * h;
            let w2: f64 = (-6..=4).map(|j| lp_window(xi / 2f64.powi(j)).powi(2)).sum();
            want += (-(xi * xi) / 2.0).exp() * w2 * h;
        }
        want /= 2.0 * PI;
        assert!((got - want).abs() < 1e-6 * want, "{got} {want}");
    }

    #[test]
    fn zero_signal_has_zero_norm() {
        let v = AnalyticSpectrum(|_| Complex64::new(0.0, 0.0));
        let spec = BesovSpec::new(0.5, 2.0, 2.0, -2, 2, 32.0).unwrap();
        assert_eq!(besov_norm_lp(&v, &spec).unwrap(), 0.0);
    }
}
