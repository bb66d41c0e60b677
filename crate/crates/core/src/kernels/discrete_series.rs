//! Discrete-series kernels on the connected affine group.
//!
//! Through the Cayley transform the connected group acts on weighted Bergman
//! spaces of the unit disk. With `alpha` the diagonal entry of the SU(1,1)
//! image, the matrix coefficient of the constant function is
//! `F_n(g) = 1 / (2 (n - 1) conj(alpha)^n)`.

use crate::error::{CoorbitError, Result};
use crate::group_core::element::{MatrixElement, Su11Element};
use crate::group_core::quad::gauss_legendre_on;
use crate::group_core::sum::CompensatedSum;
use num_complex::Complex64;

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(CoorbitError::InvalidParameter(format!("discrete-series parameter n must be >= 2, got {n}")));
    }
    Ok(())
}

/// `F_n` at matrix-chart coordinates `(a, b)`.
#[inline]
pub fn f_n_at(n: u32, a: f64, b: f64) -> Complex64 {
    // conj(alpha) = (a + 1/a - i b) / 2, so F_n = 2^n / (2 (n-1) (a + 1/a - i b)^n).
    let w = Complex64::new(a + 1.0 / a, -b).inv();
    let c = 2f64.powi(n as i32) / (2.0 * (n as f64 - 1.0));
    w.powu(n) * c
}

/// `F_n(g)` for a group element in the matrix chart.
pub fn f_n(n: u32, g: MatrixElement) -> Result<Complex64> {
    check_n(n)?;
    Ok(f_n_at(n, g.a, g.b))
}

/// `F_2` in closed form; the hot path of the discrete-series convolutions.
#[inline]
pub fn f2_at(a: f64, b: f64) -> Complex64 {
    let s = a + 1.0 / a;
    let d = 1.0 / (s * s + b * b);
    // 2 / (s - i b)^2 = 2 (s + i b)^2 d^2
    Complex64::new(2.0 * (s * s - b * b) * d * d, 4.0 * s * b * d * d)
}

/// Action of the weight-`n` discrete series on a function of the disk:
/// `(pi(g) v)(z) = (alpha - conj(beta) z)^{-n} v(g^{-1} z)`.
pub fn discrete_series_action<V: Fn(Complex64) -> Complex64>(
    n: u32,
    g: Su11Element,
    v: V,
    z: Complex64,
) -> Complex64 {
    let d = g.alpha - g.beta.conj() * z;
    let w = (g.alpha.conj() * z - g.beta) / d;
    d.powi(-(n as i32)) * v(w)
}

/// Voice transform of the polynomial `sum_k c_k z^k` against the constant
/// function: `2 F_n(g) sum_k c_k (beta / conj(alpha))^k`.
///
/// The constant factor matches [`f_n`], so the constant polynomial gives
/// `2 F_n` and the identity gives `c_0 / (n - 1)`.
pub fn voice_discrete_series(coeffs: &[Complex64], n: u32, g: MatrixElement) -> Result<Complex64> {
    check_n(n)?;
    Ok(voice_discrete_series_at(coeffs, n, g.a, g.b))
}

/// [`voice_discrete_series`] at matrix-chart coordinates.
pub fn voice_discrete_series_at(coeffs: &[Complex64], n: u32, a: f64, b: f64) -> Complex64 {
    let g = MatrixElement { a, b }.to_su11();
    let r = g.beta / g.alpha.conj();
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * r + c;
    }
    f_n_at(n, a, b) * 2.0 * acc
}

/// Quadrature rule on the unit disk for the weight `(1 - |z|^2)^gamma dx dy`,
/// `gamma > -1`. Radial nodes are Gauss-Legendre in `r^2`, or in
/// `(1 - r^2)^(gamma + 1)` when the weight is singular; the angle uses the
/// trapezoid rule. Returns `(nodes, weights)`.
pub fn disk_rule(gamma: f64, n_r: usize, n_theta: usize) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if !(gamma > -1.0) {
        return Err(CoorbitError::InvalidParameter(format!("disk weight exponent must exceed -1, got {gamma}")));
    }
    let (s, ws) = gauss_legendre_on(n_r, 0.0, 1.0);
    let mut nodes = Vec::with_capacity(n_r * n_theta);
    let mut weights = Vec::with_capacity(n_r * n_theta);
    let dth = 2.0 * std::f64::consts::PI / n_theta as f64;
    for (sj, wj) in s.iter().zip(&ws) {
        let (r, w) = if gamma >= 0.0 {
            // rho = r^2: r dr (1 - r^2)^gamma = (1 - rho)^gamma d rho / 2.
            (sj.sqrt(), wj * (1.0 - sj).powf(gamma) / 2.0)
        } else {
            // s = (1 - r^2)^(gamma + 1) absorbs the endpoint singularity.
            ((1.0 - sj.powf(1.0 / (gamma + 1.0))).max(0.0).sqrt(), wj / (2.0 * (gamma + 1.0)))
        };
        for k in 0..n_theta {
            nodes.push(Complex64::from_polar(r, k as f64 * dth));
            weights.push(w * dth);
        }
    }
    Ok((nodes, weights))
}

/// Weighted Bergman norm `( int_D |phi|^p (1 - |z|^2)^{p n / 2 - 2} dx dy )^{1/p}`
/// of a polynomial.
pub fn bergman_norm(coeffs: &[Complex64], n: u32, p: f64) -> Result<f64> {
    check_n(n)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("p must be finite and >= 1, got {p}")));
    }
    let gamma = p * n as f64 / 2.0 - 2.0;
    let deg = coeffs.len().max(1);
    let (nodes, weights) = disk_rule(gamma, 48 + 2 * deg, 64 + 4 * deg)?;
    let mut acc = CompensatedSum::new();
    for (z, w) in nodes.iter().zip(&weights) {
        acc.add(eval_poly(coeffs, *z).norm().powf(p) * w);
    }
    Ok(acc.value().powf(1.0 / p))
}

/// Horner evaluation of `sum_k c_k z^k`.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}
