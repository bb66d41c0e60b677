//! Truncated Haar quadrature grids and sampled functions on them.
//!
//! A grid is log-uniform in the dilation coordinate and uniform in the
//! translation coordinate of one chart. In either chart the left Haar measure
//! is `dx dy / x^2`, so a node carries the weight `d(log x) dy / x`, with the
//! usual trapezoid halving at the edges of each coordinate range.

use super::element::{AffineElement, MatrixElement};
use crate::error::{CoorbitError, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Coordinate chart a grid is laid out in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Affine,
    Matrix,
}

/// Which sheets of the full group the grid covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheets {
    Positive,
    Both,
}

/// Parameters of a grid; the grid itself caches node coordinates and weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub chart: Chart,
    pub sheets: Sheets,
    pub a_min: f64,
    pub a_max: f64,
    pub n_a: usize,
    pub b_max: f64,
    pub n_b: usize,
}

impl GridSpec {
    /// Reference grid used by the experiments: `a` in `[2^-6, 2^6]`, `b` in `[-64, 64]`.
    pub fn reference(n_a: usize, n_b: usize) -> GridSpec {
        GridSpec {
            chart: Chart::Matrix,
            sheets: Sheets::Positive,
            a_min: 2f64.powi(-6),
            a_max: 2f64.powi(6),
            n_a,
            b_max: 64.0,
            n_b,
        }
    }

    pub fn matrix(a_min: f64, a_max: f64, n_a: usize, b_max: f64, n_b: usize) -> GridSpec {
        GridSpec { chart: Chart::Matrix, sheets: Sheets::Positive, a_min, a_max, n_a, b_max, n_b }
    }

    pub fn affine(sheets: Sheets, a_min: f64, a_max: f64, n_a: usize, b_max: f64, n_b: usize) -> GridSpec {
        GridSpec { chart: Chart::Affine, sheets, a_min, a_max, n_a, b_max, n_b }
    }

    /// Same domain with the mesh halved in both coordinates.
    pub fn refined(&self) -> GridSpec {
        GridSpec { n_a: 2 * self.n_a - 1, n_b: 2 * self.n_b - 1, ..*self }
    }
}

/// A truncated quadrature grid for the left Haar measure.
#[derive(Debug, Clone)]
pub struct HaarGrid {
    spec: GridSpec,
    log_a: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    wa: Vec<f64>,
    wb: Vec<f64>,
    d_log_a: f64,
    d_b: f64,
}

fn trapezoid_factor(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

impl HaarGrid {
    pub fn new(spec: GridSpec) -> Result<Arc<HaarGrid>> {
        let ok = spec.a_min > 0.0
            && spec.a_max > spec.a_min
            && spec.a_max.is_finite()
            && spec.b_max > 0.0
            && spec.b_max.is_finite()
            && spec.n_a >= 2
            && spec.n_b >= 2;
        if !ok {
            return Err(CoorbitError::InvalidGrid(format!("{spec:?}")));
        }
        if spec.chart == Chart::Matrix && spec.sheets == Sheets::Both {
            return Err(CoorbitError::InvalidGrid("the matrix chart covers only the connected group".into()));
        }
        let (la0, la1) = (spec.a_min.ln(), spec.a_max.ln());
        let d_log_a = (la1 - la0) / (spec.n_a - 1) as f64;
        let d_b = 2.0 * spec.b_max / (spec.n_b - 1) as f64;
        let log_a: Vec<f64> = (0..spec.n_a)
            .map(|i| if i + 1 == spec.n_a { la1 } else { la0 + i as f64 * d_log_a })
            .collect();
        let a: Vec<f64> = (0..spec.n_a)
            .map(|i| match i {
                0 => spec.a_min,
                _ if i + 1 == spec.n_a => spec.a_max,
                _ => log_a[i].exp(),
            })
            .collect();
        let b: Vec<f64> = (0..spec.n_b)
            .map(|m| if m + 1 == spec.n_b { spec.b_max } else { -spec.b_max + m as f64 * d_b })
            .collect();
        let wa = (0..spec.n_a).map(|i| d_log_a * trapezoid_factor(i, spec.n_a) / a[i]).collect();
        let wb = (0..spec.n_b).map(|m| d_b * trapezoid_factor(m, spec.n_b)).collect();
        Ok(Arc::new(HaarGrid { spec, log_a, a, b, wa, wb, d_log_a, d_b }))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }
    pub fn chart(&self) -> Chart {
        self.spec.chart
    }
    pub fn n_a(&self) -> usize {
        self.spec.n_a
    }
    pub fn n_b(&self) -> usize {
        self.spec.n_b
    }
    pub fn n_sheets(&self) -> usize {
        match self.spec.sheets {
            Sheets::Positive => 1,
            Sheets::Both => 2,
        }
    }
    pub fn len(&self) -> usize {
        self.n_sheets() * self.spec.n_a * self.spec.n_b
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Dilation magnitudes of the rows.
    pub fn a_nodes(&self) -> &[f64] {
        &self.a
    }
    pub fn log_a_nodes(&self) -> &[f64] {
        &self.log_a
    }
    pub fn b_nodes(&self) -> &[f64] {
        &self.b
    }
    /// Row weights `d(log a) / a` including the trapezoid factor.
    pub fn row_weights(&self) -> &[f64] {
        &self.wa
    }
    /// Column weights `db` including the trapezoid factor.
    pub fn col_weights(&self) -> &[f64] {
        &self.wb
    }
    pub fn d_log_a(&self) -> f64 {
        self.d_log_a
    }
    pub fn d_b(&self) -> f64 {
        self.d_b
    }

    /// Sign of sheet `s` (`0` is positive).
    #[inline]
    pub fn sheet_sign(&self, s: usize) -> f64 {
        if s == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn index(&self, sheet: usize, i: usize, m: usize) -> usize {
        (sheet * self.spec.n_a + i) * self.spec.n_b + m
    }

    /// Inverse of [`HaarGrid::index`].
    #[inline]
    pub fn unindex(&self, k: usize) -> (usize, usize, usize) {
        let m = k % self.spec.n_b;
        let r = k / self.spec.n_b;
        (r / self.spec.n_a, r % self.spec.n_a, m)
    }

    #[inline]
    pub fn weight(&self, k: usize) -> f64 {
        let (_, i, m) = self.unindex(k);
        self.wa[i] * self.wb[m]
    }

    /// Chart coordinates `(signed dilation, translation)` of node `k`.
    #[inline]
    pub fn coords(&self, k: usize) -> (f64, f64) {
        let (s, i, m) = self.unindex(k);
        (self.sheet_sign(s) * self.a[i], self.b[m])
    }

    /// Node `k` as an affine-chart element.
    pub fn affine_node(&self, k: usize) -> AffineElement {
        let (x, y) = self.coords(k);
        self.to_affine(x, y)
    }

    /// Converts chart coordinates to the affine chart.
    #[inline]
    pub fn to_affine(&self, x: f64, y: f64) -> AffineElement {
        match self.spec.chart {
            Chart::Affine => AffineElement { a: x, b: y },
            Chart::Matrix => MatrixElement { a: x, b: y }.to_affine(),
        }
    }

    /// Converts an affine element to this grid's chart coordinates. Points on the
    /// negative sheet have no matrix-chart coordinates.
    #[inline]
    pub fn from_affine(&self, g: AffineElement) -> Option<(f64, f64)> {
        match self.spec.chart {
            Chart::Affine => Some((g.a, g.b)),
            Chart::Matrix => {
                if g.a > 0.0 {
                    let a = g.a.sqrt();
                    Some((a, g.b / a))
                } else {
                    None
                }
            }
        }
    }

    /// True when the chart point lies inside the truncated domain.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if x < 0.0 && self.spec.sheets == Sheets::Positive {
            return false;
        }
        let l = x.abs().ln();
        l >= self.log_a[0] - 1e-12
            && l <= self.log_a[self.spec.n_a - 1] + 1e-12
            && y.abs() <= self.spec.b_max + 1e-12
    }

    /// Samples a function of affine elements at every node.
    pub fn sample<F: Fn(AffineElement) -> Complex64 + Sync>(self: &Arc<Self>, f: F) -> GridFunction {
        use rayon::prelude::*;
        let values = (0..self.len()).into_par_iter().map(|k| f(self.affine_node(k))).collect();
        GridFunction { grid: Arc::clone(self), values }
    }

    /// Samples a function given in this grid's chart coordinates.
    pub fn sample_chart<F: Fn(f64, f64) -> Complex64 + Sync>(self: &Arc<Self>, f: F) -> GridFunction {
        use rayon::prelude::*;
        let values = (0..self.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = self.coords(k);
                f(x, y)
            })
            .collect();
        GridFunction { grid: Arc::clone(self), values }
    }

    pub fn zeros(self: &Arc<Self>) -> GridFunction {
        GridFunction { grid: Arc::clone(self), values: vec![Complex64::new(0.0, 0.0); self.len()] }
    }
}

impl PartialEq for HaarGrid {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

/// Complex samples of a function on the nodes of a [`HaarGrid`].
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: Arc<HaarGrid>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Arc<HaarGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoorbitError::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(CoorbitError::GridMismatch)
        }
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        if self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(CoorbitError::NonFinite(what.to_string()))
        }
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> GridFunction {
        GridFunction { grid: Arc::clone(&self.grid), values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        self.map(|z| z * c)
    }

    /// `self - other`.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(GridFunction { grid: Arc::clone(&self.grid), values })
    }

    /// `self + other`.
    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GridFunction { grid: Arc::clone(&self.grid), values })
    }

    /// Bilinear interpolation in `(log |x|, y)` of chart coordinates; zero outside the domain.
    pub fn interpolate(&self, x: f64, y: f64) -> Complex64 {
        let g = &*self.grid;
        let zero = Complex64::new(0.0, 0.0);
        if !g.contains(x, y) {
            return zero;
        }
        let sheet = if x > 0.0 { 0 } else { 1 };
        let na = g.n_a();
        let nb = g.n_b();
        let u = ((x.abs().ln() - g.log_a[0]) / g.d_log_a).clamp(0.0, (na - 1) as f64);
        let v = ((y + g.spec.b_max) / g.d_b).clamp(0.0, (nb - 1) as f64);
        let i0 = (u.floor() as usize).min(na - 2);
        let m0 = (v.floor() as usize).min(nb - 2);
        let (fu, fv) = (u - i0 as f64, v - m0 as f64);
        let f = |i: usize, m: usize| self.values[g.index(sheet, i, m)];
        f(i0, m0) * ((1.0 - fu) * (1.0 - fv))
            + f(i0 + 1, m0) * (fu * (1.0 - fv))
            + f(i0, m0 + 1) * ((1.0 - fu) * fv)
            + f(i0 + 1, m0 + 1) * (fu * fv)
    }

    /// Interpolated value at an affine element.
    pub fn interpolate_at(&self, g: AffineElement) -> Complex64 {
        match self.grid.from_affine(g) {
            Some((x, y)) => self.interpolate(x, y),
            None => Complex64::new(0.0, 0.0),
        }
    }
}
