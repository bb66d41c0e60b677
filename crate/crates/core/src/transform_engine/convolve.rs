//! Group convolution `(f * K)(x) = int f(y) K(y^{-1} x) dy` by direct quadrature.
//!
//! In the affine chart `y^{-1} x = (x_a / y_a, (x_b - y_b) / y_a)`, so for a fixed
//! pair of rows the kernel depends only on the difference of translation
//! indices and each row pair is a Toeplitz product. In the matrix chart
//! `y^{-1} x = (x_a / y_a, x_b / y_a - y_b / x_a)` and the kernel row is refilled
//! for every output node.

use crate::error::{CoorbitError, Result};
use crate::group_core::element::{AffineElement, MatrixElement};
use crate::group_core::grid::{Chart, GridFunction, HaarGrid};
use crate::group_core::quad::relative_l2;
use crate::group_core::sum::ComplexSum;
use crate::kernels::{kernel_normalize, Kernel, KernelKind};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A function on the group that can be evaluated anywhere.
pub trait GroupKernel: Sync {
    fn eval(&self, g: AffineElement) -> Complex64;

    /// `out[j] = K(x, t0 + j dt)` in coordinates of `chart`.
    fn fill_row(&self, chart: Chart, x: f64, t0: f64, dt: f64, out: &mut [Complex64]) {
        for (j, o) in out.iter_mut().enumerate() {
            let y = t0 + dt * j as f64;
            let g = match chart {
                Chart::Affine => AffineElement { a: x, b: y },
                Chart::Matrix => MatrixElement { a: x, b: y }.to_affine(),
            };
            *o = self.eval(g);
        }
    }

    /// `|A|` range outside which the kernel vanishes, if bounded.
    fn dilation_support(&self) -> Option<(f64, f64)> {
        None
    }

    /// Width in the matrix-chart translation variable of the row `K(x, .)`;
    /// narrow rows are integrated on a refined mesh.
    fn translation_width(&self, _x: f64) -> Option<f64> {
        None
    }

    /// Called once a convolution finishes; grid-backed kernels report range violations here.
    fn finish(&self) -> Result<()> {
        Ok(())
    }
}

impl GroupKernel for Kernel {
    fn eval(&self, g: AffineElement) -> Complex64 {
        Kernel::eval(self, g)
    }
    fn fill_row(&self, chart: Chart, x: f64, t0: f64, dt: f64, out: &mut [Complex64]) {
        Kernel::fill_row(self, chart, x, t0, dt, out)
    }
    fn dilation_support(&self) -> Option<(f64, f64)> {
        Kernel::dilation_support(self)
    }
    fn translation_width(&self, x: f64) -> Option<f64> {
        match self.kind {
            KernelKind::DiscreteSeries { .. } if x > 0.0 => Some(x + 1.0 / x),
            _ => None,
        }
    }
}

/// A kernel known only through samples, read by bilinear interpolation.
///
/// Points more than one cell outside the sampled domain read zero; in strict
/// mode they also make the convolution fail.
pub struct GridKernel {
    pub samples: GridFunction,
    pub strict: bool,
    escaped: AtomicBool,
}

impl GridKernel {
    pub fn new(samples: GridFunction, strict: bool) -> Self {
        GridKernel { samples, strict, escaped: AtomicBool::new(false) }
    }

    fn outside(&self, g: AffineElement) -> bool {
        let grid = &self.samples.grid;
        match grid.from_affine(g) {
            None => true,
            Some((x, y)) => {
                let l = x.abs().ln();
                let la = grid.log_a_nodes();
                l < la[0] - grid.d_log_a()
                    || l > la[la.len() - 1] + grid.d_log_a()
                    || y.abs() > grid.spec().b_max + grid.d_b()
                    || (x < 0.0 && grid.n_sheets() == 1)
            }
        }
    }
}

impl GroupKernel for GridKernel {
    fn eval(&self, g: AffineElement) -> Complex64 {
        if self.strict && self.outside(g) {
            self.escaped.store(true, Ordering::Relaxed);
        }
        self.samples.interpolate_at(g)
    }

    fn finish(&self) -> Result<()> {
        if self.escaped.swap(false, Ordering::Relaxed) {
            return Err(CoorbitError::InvalidParameter(
                "kernel evaluated more than one cell outside its sampled domain".into(),
            ));
        }
        Ok(())
    }
}

/// Cached Toeplitz tables for repeated affine-chart convolutions with one kernel.
pub struct ConvolutionPlan<'k, K: GroupKernel + ?Sized> {
    kernel: &'k K,
    grid: Arc<HaarGrid>,
    /// `tables[tx][r]` holds `K(x_a / y_a, d db / y_a)` for `d = 1-n_b ..= n_b-1`,
    /// or `None` when the kernel vanishes for this pair of rows.
    tables: Option<Vec<Vec<Option<Vec<Complex64>>>>>,
}

/// Table memory ceiling; larger affine problems rebuild tables on the fly.
const TABLE_BYTES: usize = 768 << 20;

fn n_rows(grid: &HaarGrid) -> usize {
    grid.n_sheets() * grid.n_a()
}

fn row_dilation(grid: &HaarGrid, r: usize) -> f64 {
    let (s, i) = (r / grid.n_a(), r % grid.n_a());
    grid.sheet_sign(s) * grid.a_nodes()[i]
}

fn pair_active<K: GroupKernel + ?Sized>(kernel: &K, ratio: f64) -> bool {
    match kernel.dilation_support() {
        Some((lo, hi)) => ratio.abs() > lo && ratio.abs() < hi,
        None => true,
    }
}

fn toeplitz_table<K: GroupKernel + ?Sized>(kernel: &K, grid: &HaarGrid, tx: usize, sy: usize) -> Option<Vec<Complex64>> {
    let (xa, ya) = (row_dilation(grid, tx), row_dilation(grid, sy));
    if !pair_active(kernel, xa / ya) {
        return None;
    }
    let nb = grid.n_b();
    let dt = grid.d_b() / ya;
    let mut t = vec![ZERO; 2 * nb - 1];
    kernel.fill_row(Chart::Affine, xa / ya, -((nb - 1) as f64) * dt, dt, &mut t);
    Some(t)
}

impl<'k, K: GroupKernel + ?Sized> ConvolutionPlan<'k, K> {
    /// Prepares convolutions on `grid`. Affine tables are built eagerly when they fit in memory.
    pub fn new(kernel: &'k K, grid: &Arc<HaarGrid>) -> Self {
        let mut plan = ConvolutionPlan { kernel, grid: Arc::clone(grid), tables: None };
        if grid.chart() == Chart::Affine {
            let rows = n_rows(grid);
            let active: usize = (0..rows)
                .map(|tx| (0..rows).filter(|&sy| pair_active(kernel, row_dilation(grid, tx) / row_dilation(grid, sy))).count())
                .sum();
            if active * (2 * grid.n_b() - 1) * std::mem::size_of::<Complex64>() <= TABLE_BYTES {
                let g = &**grid;
                plan.tables = Some(
                    (0..rows)
                        .into_par_iter()
                        .map(|tx| (0..rows).map(|sy| toeplitz_table(kernel, g, tx, sy)).collect())
                        .collect(),
                );
            }
        }
        plan
    }

    pub fn grid(&self) -> &Arc<HaarGrid> {
        &self.grid
    }

    /// `f * K` at every node of the plan's grid.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if !(Arc::ptr_eq(&f.grid, &self.grid) || *f.grid == *self.grid) {
            return Err(CoorbitError::GridMismatch);
        }
        f.check_finite("convolution input")?;
        let g = &*self.grid;
        let nb = g.n_b();
        let rows = n_rows(g);
        // Rows of f that are identically zero contribute nothing.
        let live: Vec<bool> = (0..rows).map(|r| f.values[r * nb..(r + 1) * nb].iter().any(|z| *z != ZERO)).collect();
        let values: Vec<Complex64> = match g.chart() {
            Chart::Affine => (0..rows)
                .into_par_iter()
                .flat_map_iter(|tx| self.affine_row(f, tx, &live))
                .collect(),
            Chart::Matrix => (0..g.len()).into_par_iter().map_init(|| Vec::with_capacity(nb), |buf, k| self.matrix_node(f, k, &live, buf)).collect(),
        };
        self.kernel.finish()?;
        let out = GridFunction { grid: Arc::clone(&self.grid), values };
        out.check_finite("convolution output")?;
        Ok(out)
    }

    fn affine_row(&self, f: &GridFunction, tx: usize, live: &[bool]) -> Vec<Complex64> {
        let g = &*self.grid;
        let nb = g.n_b();
        let wa = g.row_weights();
        let wb = g.col_weights();
        let mut acc: Vec<ComplexSum> = (0..nb).map(|_| ComplexSum::new()).collect();
        let mut weighted = vec![ZERO; nb];
        for sy in 0..n_rows(g) {
            if !live[sy] {
                continue;
            }
            let owned;
            let table = match &self.tables {
                Some(t) => match &t[tx][sy] {
                    Some(v) => v,
                    None => continue,
                },
                None => match toeplitz_table(self.kernel, g, tx, sy) {
                    Some(v) => {
                        owned = v;
                        &owned
                    }
                    None => continue,
                },
            };
            let w_row = wa[sy % g.n_a()];
            let src = &f.values[sy * nb..(sy + 1) * nb];
            for m in 0..nb {
                weighted[m] = src[m] * (wb[m] * w_row);
            }
            for (mx, a) in acc.iter_mut().enumerate() {
                // d = mx - my, stored at offset d + nb - 1.
                let t = &table[mx..mx + nb];
                let mut s = ZERO;
                for (my, w) in weighted.iter().enumerate() {
                    s += w * t[nb - 1 - my];
                }
                a.add(s);
            }
        }
        acc.into_iter().map(|a| a.value()).collect()
    }

    fn matrix_node(&self, f: &GridFunction, k: usize, live: &[bool], buf: &mut Vec<Complex64>) -> Complex64 {
        let g = &*self.grid;
        let nb = g.n_b();
        let (xa, xb) = g.coords(k);
        let b_max = g.spec().b_max;
        let db = g.d_b();
        let mut acc = ComplexSum::new();
        for iy in 0..g.n_a() {
            if !live[iy] {
                continue;
            }
            let ya = g.a_nodes()[iy];
            let src = &f.values[iy * nb..(iy + 1) * nb];
            // Kernel at (xa / ya, xb / ya - y_b / xa) with y_b = -b_max + m db.
            let step = db / xa;
            let r = match self.kernel.translation_width(xa / ya) {
                Some(w) => ((REFINE_PER_WIDTH * step / w).ceil() as usize).clamp(1, MAX_REFINE),
                None => 1,
            };
            let t0 = xb / ya + b_max / xa;
            buf.resize(nb, ZERO);
            self.kernel.fill_row(Chart::Matrix, xa / ya, t0, -step, buf);
            let mut s = ZERO;
            for m in 0..nb {
                s += src[m] * buf[m] * g.col_weights()[m];
            }
            if r > 1 {
                // The kernel peaks at t = 0, i.e. near node t0 / step. Away from
                // the peak it varies on the scale |t| and the coarse rule suffices;
                // within a few cells the coarse rule is replaced by a refined one.
                let centre = t0 / step;
                let lo = (centre.floor() - PEAK_CELLS).max(0.0);
                let hi = (centre.ceil() + PEAK_CELLS).min((nb - 1) as f64);
                if lo < hi {
                    let (lo, hi) = (lo as usize, hi as usize);
                    let mut coarse = ZERO;
                    for m in lo..=hi {
                        let w = if m == lo || m == hi { 0.5 * db } else { db };
                        coarse += src[m] * buf[m] * w;
                    }
                    let nf = (hi - lo) * r + 1;
                    let mut fine_k = vec![ZERO; nf];
                    self.kernel.fill_row(Chart::Matrix, xa / ya, t0 - lo as f64 * step, -step / r as f64, &mut fine_k);
                    let h = db / r as f64;
                    let mut fine = ZERO;
                    for (j, kv) in fine_k.iter().enumerate() {
                        let w = if j == 0 || j == nf - 1 { 0.5 * h } else { h };
                        fine += cubic_at(src, lo as f64 + j as f64 / r as f64) * kv * w;
                    }
                    s += fine - coarse;
                }
            }
            acc.add(s * g.row_weights()[iy]);
        }
        acc.value()
    }
}

/// Matrix-chart rows are refined until the kernel width spans this many mesh steps.
const REFINE_PER_WIDTH: f64 = 4.0;
const MAX_REFINE: usize = 64;
/// Half-width, in coarse cells, of the refined band around the kernel peak.
const PEAK_CELLS: f64 = 6.0;

/// Four-point Lagrange interpolation of equally spaced samples at fractional index `u`.
fn cubic_at(v: &[Complex64], u: f64) -> Complex64 {
    let n = v.len();
    if n < 4 {
        let i = (u.floor() as usize).min(n.saturating_sub(2));
        let t = u - i as f64;
        return if n == 1 { v[0] } else { v[i] * (1.0 - t) + v[i + 1] * t };
    }
    let i0 = (u.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let t = u - i0 as f64;
    let (t0, t1, t2, t3) = (t, t - 1.0, t - 2.0, t - 3.0);
    v[i0] * (-t1 * t2 * t3 / 6.0) + v[i0 + 1] * (t0 * t2 * t3 / 2.0) + v[i0 + 2] * (-t0 * t1 * t3 / 2.0)
        + v[i0 + 3] * (t0 * t1 * t2 / 6.0)
}

/// `f * K` on `f`'s grid.
pub fn group_convolve<K: GroupKernel + ?Sized>(f: &GridFunction, kernel: &K) -> Result<GridFunction> {
    ConvolutionPlan::new(kernel, &f.grid).apply(f)
}

/// `||K * K - K||_2 / ||K||_2` for a kernel sampled on `grid`.
pub fn idempotency_residual(kernel: &Kernel, grid: &Arc<HaarGrid>) -> Result<f64> {
    let k = kernel.sample(grid);
    let kk = group_convolve(&k, kernel)?;
    relative_l2(&kk, &k)
}

/// Post-check threshold for [`normalize_idempotent`].
pub const IDEMPOTENCY_TOL: f64 = 1e-2;

/// Normalizes `kernel` by quadrature on `grid` and checks that the result is
/// idempotent within `tol`. Returns `(kappa, normalized kernel, residual)`.
pub fn normalize_idempotent(kernel: &Kernel, grid: &Arc<HaarGrid>, tol: f64) -> Result<(f64, Kernel, f64)> {
    let k_e = Kernel { kappa: 1.0, ..*kernel }.eval(crate::group_core::element::AffineElement::IDENTITY).norm();
    if k_e < 1e-12 {
        return Err(CoorbitError::DegenerateKernel(k_e));
    }
    let (kappa, normalized) = kernel_normalize(kernel, grid)?;
    let residual = idempotency_residual(&normalized, grid)?;
    if !residual.is_finite() {
        return Err(CoorbitError::NonFinite("idempotency residual".into()));
    }
    if residual > tol {
        return Err(CoorbitError::NotIdempotent(residual));
    }
    Ok((kappa, normalized, residual))
}

/// `||f * K - f||_2 / ||f||_2`: how well `f` is reproduced by the kernel.
pub fn reproducing_residual<K: GroupKernel + ?Sized>(f: &GridFunction, kernel: &K) -> Result<f64> {
    let fk = group_convolve(f, kernel)?;
    relative_l2(&fk, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::{GridSpec, Sheets};
    use crate::group_core::quad::quad_integrate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct double loop over nodes, no tables and no row skipping.
    fn naive<K: GroupKernel>(f: &GridFunction, k: &K) -> Vec<Complex64> {
        let g = &f.grid;
        (0..g.len())
            .map(|kx| {
                let x = g.affine_node(kx);
                (0..g.len()).map(|ky| f.values[ky] * k.eval(g.affine_node(ky).inv_compose(x)) * g.weight(ky)).sum()
            })
            .collect()
    }

    struct Gaussian;
    impl GroupKernel for Gaussian {
        fn eval(&self, g: AffineElement) -> Complex64 {
            let l = g.a.abs().ln();
            c((-(l * l) - g.b * g.b).exp(), 0.3 * g.b * g.a.signum())
        }
    }

    #[test]
    fn affine_tables_match_naive_sum() {
        let g = HaarGrid::new(GridSpec::affine(Sheets::Both, 0.5, 2.0, 7, 3.0, 9)).unwrap();
        let f = g.sample_chart(|x, y| c((-(y * y)).exp() * x.abs(), x.signum() * 0.1));
        let got = group_convolve(&f, &Gaussian).unwrap();
        for (a, b) in got.values.iter().zip(naive(&f, &Gaussian)) {
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn matrix_chart_matches_naive_sum() {
        let g = HaarGrid::new(GridSpec::matrix(0.5, 2.0, 6, 2.0, 7)).unwrap();
        let f = g.sample_chart(|x, y| c(x * (-(y * y)).exp(), y));
        let k = Unrefined(Kernel::discrete_series(2).unwrap());
        let got = group_convolve(&f, &k).unwrap();
        for (a, b) in got.values.iter().zip(naive(&f, &k)) {
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
        }
    }

    /// Same kernel without a width hint, so the plain trapezoid is used.
    struct Unrefined(Kernel);
    impl GroupKernel for Unrefined {
        fn eval(&self, g: AffineElement) -> Complex64 {
            self.0.eval(g)
        }
    }

    #[test]
    fn normalize_idempotent_checks() {
        let g = HaarGrid::new(GridSpec::matrix(1.0 / 64.0, 64.0, 49, 64.0, 129)).unwrap();
        let k = Kernel::discrete_series(2).unwrap();
        let (kappa, kn, res) = normalize_idempotent(&k, &g, 5e-2).unwrap();
        assert!(kappa > 3.0 && kappa < 3.2 && res < 5e-2);
        assert_eq!(kn.kappa, kappa);
        // Scale covariance: a rescaled kernel normalizes to the same kernel.
        let (_, kn2, _) = normalize_idempotent(&Kernel { kappa: 7.0, ..k }, &g, 5e-2).unwrap();
        assert_eq!(kn2, kn);
        assert!(matches!(normalize_idempotent(&k, &g, 1e-9), Err(CoorbitError::NotIdempotent(_))));
    }

    #[test]
    fn peak_refinement_improves_idempotency() {
        let g = HaarGrid::new(GridSpec::matrix(1.0 / 64.0, 64.0, 49, 64.0, 129)).unwrap();
        let k = Kernel { kappa: std::f64::consts::PI, ..Kernel::discrete_series(2).unwrap() };
        let f = g.sample(|x| k.eval(x));
        let residual = |ff: &GridFunction| {
            let inside: Vec<usize> = (0..g.len())
                .filter(|&i| {
                    let (a, b) = g.coords(i);
                    a > 0.25 && a < 4.0 && b.abs() < 4.0
                })
                .collect();
            inside.iter().map(|&i| (ff.values[i] - f.values[i]).norm()).fold(0.0, f64::max)
        };
        let refined = residual(&group_convolve(&f, &k).unwrap());
        let plain = residual(&group_convolve(&f, &Unrefined(k)).unwrap());
        assert!(refined < 0.5 * plain, "refined {refined} plain {plain}");
    }

    #[test]
    fn convolution_is_linear() {
        let g = HaarGrid::new(GridSpec::affine(Sheets::Positive, 0.5, 2.0, 9, 3.0, 11)).unwrap();
        let f = g.sample_chart(|x, y| c(x.ln(), y));
        let h = g.sample_chart(|x, y| c(y * y, -x));
        let lhs = group_convolve(&f.add(&h).unwrap(), &Gaussian).unwrap();
        let rhs = group_convolve(&f, &Gaussian).unwrap().add(&group_convolve(&h, &Gaussian).unwrap()).unwrap();
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn delta_like_input_samples_kernel() {
        // A single nonzero node y gives w_y f(y) K(y^{-1} x).
        let g = HaarGrid::new(GridSpec::affine(Sheets::Positive, 0.5, 2.0, 9, 3.0, 13)).unwrap();
        let mut f = g.zeros();
        let ky = g.index(0, 4, 6);
        f.values[ky] = c(1.0, 0.0);
        let out = group_convolve(&f, &Gaussian).unwrap();
        let y = g.affine_node(ky);
        for k in 0..g.len() {
            let want = Gaussian.eval(y.inv_compose(g.affine_node(k))) * g.weight(ky);
            assert!((out.values[k] - want).norm() < 1e-14);
        }
        assert!(quad_integrate(&out).norm() > 0.0);
    }

    #[test]
    fn strict_grid_kernel_reports_escape() {
        let g = HaarGrid::new(GridSpec::affine(Sheets::Positive, 0.5, 2.0, 9, 3.0, 13)).unwrap();
        let small = HaarGrid::new(GridSpec::affine(Sheets::Positive, 0.9, 1.1, 5, 0.5, 5)).unwrap();
        let k = GridKernel::new(small.sample_chart(|_, _| c(1.0, 0.0)), true);
        let f = g.sample_chart(|_, _| c(1.0, 0.0));
        assert!(group_convolve(&f, &k).is_err());
        let lenient = GridKernel::new(small.sample_chart(|_, _| c(1.0, 0.0)), false);
        assert!(group_convolve(&f, &lenient).is_ok());
    }
}
