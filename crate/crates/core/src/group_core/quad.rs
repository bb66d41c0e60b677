//! Haar quadrature, Lebesgue and mixed norms on grids, and Gauss-Legendre rules.

use super::grid::GridFunction;
use super::sum::{ComplexSum, CompensatedSum};
use crate::error::{CoorbitError, Result};
use num_complex::Complex64;

/// Integral of a grid function against the left Haar measure.
pub fn quad_integrate(f: &GridFunction) -> Complex64 {
    let g = &*f.grid;
    let mut rows = ComplexSum::new();
    for s in 0..g.n_sheets() {
        for i in 0..g.n_a() {
            let mut row = ComplexSum::new();
            for m in 0..g.n_b() {
                row.add(f.values[g.index(s, i, m)] * g.col_weights()[m]);
            }
            rows.add(row.value() * g.row_weights()[i]);
        }
    }
    rows.value()
}

/// `sum_k w_k f_k conj(h_k)`.
pub fn inner_product(f: &GridFunction, h: &GridFunction) -> Result<Complex64> {
    f.same_grid(h)?;
    let g = &*f.grid;
    let mut acc = ComplexSum::new();
    for k in 0..g.len() {
        acc.add(f.values[k] * h.values[k].conj() * g.weight(k));
    }
    Ok(acc.value())
}

/// `L^p(G)` norm; `p = inf` gives the maximum modulus over nodes.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(CoorbitError::InvalidParameter(format!("p must be >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.values.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let g = &*f.grid;
    let mut acc = CompensatedSum::new();
    for k in 0..g.len() {
        acc.add(f.values[k].norm().powf(p) * g.weight(k));
    }
    Ok(acc.value().powf(1.0 / p))
}

/// Relative `L^2` distance `||f - h|| / ||h||`.
pub fn relative_l2(f: &GridFunction, h: &GridFunction) -> Result<f64> {
    let d = f.sub(h)?;
    Ok(lp_norm(&d, 2.0)? / lp_norm(h, 2.0)?)
}

/// Mixed norm `( int ( int |f(a,b)|^p a^{-s} db )^{q/p} da/a^2 )^{1/q}` with the
/// inner integral over translations. Sheets are combined in `l^q`.
pub fn mixed_norm(f: &GridFunction, p: f64, q: f64, s: f64) -> Result<f64> {
    if !(p >= 1.0) || !(q >= 1.0) || p.is_infinite() || q.is_infinite() {
        return Err(CoorbitError::InvalidParameter(format!("need finite p, q >= 1, got p={p}, q={q}")));
    }
    let g = &*f.grid;
    let mut outer = CompensatedSum::new();
    for sh in 0..g.n_sheets() {
        for i in 0..g.n_a() {
            let a = g.a_nodes()[i];
            let mut inner = CompensatedSum::new();
            for m in 0..g.n_b() {
                inner.add(f.values[g.index(sh, i, m)].norm().powf(p) * g.col_weights()[m]);
            }
            let row = (inner.value() * a.powf(-s)).powf(q / p);
            outer.add(row * g.row_weights()[i]);
        }
    }
    Ok(outer.value().powf(1.0 / q))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss-Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (hi - lo);
    let c = 0.5 * (hi + lo);
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| v * h).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::{GridSpec, HaarGrid, Sheets};

    #[test]
    fn indicator_box_integral() {
        // Unit indicator of a in [1, e], b in [-1/2, 1/2]: integral 1 - 1/e.
        let spec = GridSpec::affine(Sheets::Positive, 1.0, std::f64::consts::E, 401, 0.5, 3);
        let g = HaarGrid::new(spec).unwrap();
        let f = g.sample_chart(|_, _| Complex64::new(1.0, 0.0));
        let v = quad_integrate(&f).re;
        assert!((v - (1.0 - (-1f64).exp())).abs() < 1e-6, "{v}");
    }

    #[test]
    fn lp_reduces_to_mixed() {
        let g = HaarGrid::new(GridSpec::matrix(0.25, 4.0, 33, 6.0, 49)).unwrap();
        let f = g.sample_chart(|x, y| Complex64::new((-(x.ln()).powi(2) - y * y).exp(), 0.3 * y));
        for p in [1.0, 1.5, 2.0, 3.0] {
            let a = lp_norm(&f, p).unwrap();
            let b = mixed_norm(&f, p, p, 0.0).unwrap();
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(7);
        for k in 0..14 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((s - exact).abs() < 1e-13, "k={k}");
        }
        let (x, w) = gauss_legendre_on(1, 0.0, 2.0);
        assert_eq!((x[0], w[0]), (1.0, 2.0));
    }
}
