//! Oscillation of `F_2` under left multiplication by a neighbourhood of the identity.

use crate::error::{CoorbitError, Result};
use crate::group_core::element::MatrixElement;
use crate::group_core::grid::{Chart, HaarGrid};
use crate::kernels::f2_at;
use rayon::prelude::*;

/// The window `U = {(a, b) : 1/delta <= a <= delta, |b| <= gamma}` in the matrix chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscWindow {
    pub delta: f64,
    pub gamma: f64,
}

impl OscWindow {
    /// `delta = 1` or `gamma = 0` give degenerate windows, which are allowed.
    pub fn new(delta: f64, gamma: f64) -> Result<Self> {
        if !(delta >= 1.0) || !(gamma >= 0.0) || !delta.is_finite() || !gamma.is_finite() {
            return Err(CoorbitError::InvalidParameter(format!(
                "window needs delta >= 1 and gamma >= 0, got ({delta}, {gamma})"
            )));
        }
        Ok(OscWindow { delta, gamma })
    }

    pub fn contains(&self, g: MatrixElement) -> bool {
        let tol = 1e-12;
        g.a >= 1.0 / self.delta * (1.0 - tol) && g.a <= self.delta * (1.0 + tol) && g.b.abs() <= self.gamma + tol
    }

    /// `n x n` sample of the window: log-uniform in `a`, uniform in `b`.
    pub fn sample(&self, n: usize) -> Vec<MatrixElement> {
        let n = n.max(1);
        let ld = self.delta.ln();
        let node = |j: usize, lo: f64, hi: f64| if n == 1 { 0.5 * (lo + hi) } else { lo + (hi - lo) * j as f64 / (n - 1) as f64 };
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            let a = node(i, -ld, ld).exp();
            for j in 0..n {
                out.push(MatrixElement { a, b: node(j, -self.gamma, self.gamma) });
            }
        }
        out
    }
}

/// `eps = sqrt(B+ B-)` with `B+- = 2 (delta +- 1)^2 + gamma^2 + 2 (delta +- 1) gamma`,
/// taking `|delta - 1|` in the second factor.
pub fn osc_bound(w: &OscWindow) -> f64 {
    let factor = |d: f64| 2.0 * d * d + w.gamma * w.gamma + 2.0 * d * w.gamma;
    (factor(w.delta + 1.0) * factor(w.delta - 1.0)).sqrt()
}

/// `(1 - eps, 1 + eps)`; fails when `eps >= 1`.
pub fn corollary_constants(w: &OscWindow) -> Result<(f64, f64)> {
    let eps = osc_bound(w);
    if eps >= 1.0 {
        return Err(CoorbitError::OscillationTooLarge(eps));
    }
    Ok((1.0 - eps, 1.0 + eps))
}

fn check_grid(grid: &HaarGrid) -> Result<()> {
    if grid.chart() != Chart::Matrix {
        return Err(CoorbitError::InvalidGrid("oscillation is measured on a matrix-chart grid".into()));
    }
    Ok(())
}

/// `sup |F_2(u g) / F_2(g) - 1|` over an `n_window x n_window` sample of the
/// window and all nodes `g` of a matrix-chart grid.
pub fn osc_measure(w: &OscWindow, grid: &HaarGrid, n_window: usize) -> Result<f64> {
    check_grid(grid)?;
    let parts: Vec<f64> = w
        .sample(n_window)
        .par_iter()
        .map(|u| {
            (0..grid.len()).fold(0.0f64, |m, k| {
                let (x, y) = grid.coords(k);
                let ug = u.compose(MatrixElement { a: x, b: y });
                m.max((f2_at(ug.a, ug.b) / f2_at(x, y) - 1.0).norm())
            })
        })
        .collect();
    Ok(parts.into_iter().fold(0.0, f64::max))
}

/// Smallest and largest `|F_2(u g)| / |F_2(g)|` over the same sample.
pub fn ratio_range(w: &OscWindow, grid: &HaarGrid, n_window: usize) -> Result<(f64, f64)> {
    check_grid(grid)?;
    let parts: Vec<(f64, f64)> = w
        .sample(n_window)
        .par_iter()
        .map(|u| {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for k in 0..grid.len() {
                let (x, y) = grid.coords(k);
                let ug = u.compose(MatrixElement { a: x, b: y });
                let r = f2_at(ug.a, ug.b).norm() / f2_at(x, y).norm();
                lo = lo.min(r);
                hi = hi.max(r);
            }
            (lo, hi)
        })
        .collect();
    Ok(parts.into_iter().fold((f64::INFINITY, 0.0), |(a, b), (c, d)| (a.min(c), b.max(d))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::GridSpec;

    #[test]
    fn closed_form_values() {
        let w = OscWindow::new(1.0, 0.1).unwrap();
        let want = ((8.0f64 + 0.01 + 0.4) * 0.01).sqrt();
        assert!((osc_bound(&w) - want).abs() < 1e-15);
        assert_eq!(osc_bound(&OscWindow::new(1.0, 0.0).unwrap()), 0.0);
        let (c1, c2) = corollary_constants(&w).unwrap();
        assert!((c1 - (1.0 - want)).abs() < 1e-15 && (c2 - (1.0 + want)).abs() < 1e-15);
        assert!(corollary_constants(&OscWindow::new(1.5, 0.5).unwrap()).is_err());
    }

    #[test]
    fn measured_oscillation_is_dominated() {
        let g = HaarGrid::new(GridSpec::reference(33, 65)).unwrap();
        for &(d, c) in &[(1.01, 0.01), (1.1, 0.1), (1.3, 0.3)] {
            let w = OscWindow::new(d, c).unwrap();
            let m = osc_measure(&w, &g, 5).unwrap();
            assert!(m > 0.0 && m <= osc_bound(&w), "{d} {c} {m}");
        }
    }

    #[test]
    fn identity_window_has_no_oscillation() {
        let g = HaarGrid::new(GridSpec::reference(9, 17)).unwrap();
        let w = OscWindow::new(1.0, 0.0).unwrap();
        assert_eq!(osc_measure(&w, &g, 3).unwrap(), 0.0);
        assert_eq!(ratio_range(&w, &g, 3).unwrap(), (1.0, 1.0));
    }
}
