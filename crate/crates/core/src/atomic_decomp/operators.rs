//! Sampling, synthesis and the three frame operators on grid functions, with
//! Neumann-series inversion.

use super::lattice::AtomicLattice;
use crate::error::{CoorbitError, Result};
use crate::group_core::element::{AffineElement, MatrixElement};
use crate::group_core::grid::{Chart, GridFunction, HaarGrid};
use crate::group_core::quad::{lp_norm, relative_l2};
use crate::group_core::sum::ComplexSum;
use crate::kernels::{f2_at, Kernel};
use crate::transform_engine::ConvolutionPlan;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `F_2 / pi`, the projection kernel on the whole group, in matrix coordinates.
#[inline]
pub fn f2_hat(m: MatrixElement) -> Complex64 {
    f2_at(m.a, m.b) / PI
}

/// `F_2 / pi` as a convolution kernel.
pub fn projection_kernel() -> Kernel {
    Kernel { kappa: PI, ..Kernel::discrete_series(2).expect("n = 2 is valid") }
}

/// `(l_y F_2/pi)(x) = F_2(y^{-1} x) / pi`.
#[inline]
pub fn translated_atom(y: MatrixElement, x: MatrixElement) -> Complex64 {
    f2_hat(y.inv_compose(x))
}

fn matrix_grid(grid: &HaarGrid) -> Result<()> {
    if grid.chart() != Chart::Matrix {
        return Err(CoorbitError::InvalidGrid("atomic decompositions use matrix-chart grids".into()));
    }
    Ok(())
}

/// `(f(x_i))` by bilinear interpolation.
pub fn analysis_point(f: &GridFunction, lat: &AtomicLattice) -> Result<Vec<Complex64>> {
    matrix_grid(&f.grid)?;
    lat.points
        .iter()
        .map(|p| {
            if !f.grid.contains(p.m.a, p.m.b) {
                return Err(CoorbitError::InvalidParameter(format!("lattice point ({}, {}) is off the grid", p.j, p.k)));
            }
            Ok(f.interpolate(p.m.a, p.m.b))
        })
        .collect()
}

/// Exact samples `(f(x_i))` of a function given in closed form.
pub fn lattice_samples<F: Fn(MatrixElement) -> Complex64 + Sync>(lat: &AtomicLattice, f: F) -> Vec<Complex64> {
    lat.points.par_iter().map(|p| f(p.m)).collect()
}

/// `(int f psi_i)` by grid quadrature.
pub fn analysis_mean(f: &GridFunction, lat: &AtomicLattice) -> Result<Vec<Complex64>> {
    matrix_grid(&f.grid)?;
    let g = &*f.grid;
    let mut acc: Vec<ComplexSum> = (0..lat.len()).map(|_| ComplexSum::new()).collect();
    for k in 0..g.len() {
        if f.values[k] == ZERO {
            continue;
        }
        let x = g.affine_node(k);
        for i in lat.atoms_at(x) {
            acc[i].add(f.values[k] * (lat.psi(i, x) * g.weight(k)));
        }
    }
    Ok(acc.into_iter().map(|a| a.value()).collect())
}

/// `sum_i lambda_i l_{x_i} F_2/pi` at every node of `grid`.
pub fn synthesis(lambda: &[Complex64], lat: &AtomicLattice, grid: &Arc<HaarGrid>) -> Result<GridFunction> {
    matrix_grid(grid)?;
    if lambda.len() != lat.len() {
        return Err(CoorbitError::InvalidParameter(format!(
            "{} coefficients for {} lattice points",
            lambda.len(),
            lat.len()
        )));
    }
    let live: Vec<(MatrixElement, Complex64)> =
        lat.points.iter().zip(lambda).filter(|(_, l)| **l != ZERO).map(|(p, l)| (p.m, *l)).collect();
    let f = grid.sample_chart(|a, b| {
        let x = MatrixElement { a, b };
        let mut s = ComplexSum::new();
        for (y, l) in &live {
            s.add(l * translated_atom(*y, x));
        }
        s.value()
    });
    f.check_finite("synthesis")?;
    Ok(f)
}

/// `sum_i f(x_i) psi_i` on the grid.
fn sample_and_spread(f: &GridFunction, lat: &AtomicLattice) -> Result<GridFunction> {
    let s = analysis_point(f, lat)?;
    let g = &f.grid;
    Ok(g.sample(|x| lat.atoms_at(x).into_iter().map(|i| s[i] * lat.psi(i, x)).sum()))
}

/// A bounded linear map of grid functions.
pub trait LinearOperator: Sync {
    fn apply(&self, f: &GridFunction) -> Result<GridFunction>;
}

/// The identity, useful as a degenerate test case.
pub struct Identity;

impl LinearOperator for Identity {
    fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        Ok(f.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameOpKind {
    /// `S f = sum_i f(x_i) psi_i * F_2/pi`.
    S,
    /// `T f = sum_i c_i f(x_i) l_{x_i} F_2/pi`.
    T,
    /// `R f = sum_i (int f psi_i) l_{x_i} F_2/pi`.
    R,
}

pub struct FrameOperator<'a> {
    pub kind: FrameOpKind,
    pub lattice: &'a AtomicLattice,
}

impl LinearOperator for FrameOperator<'_> {
    fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        matrix_grid(&f.grid)?;
        let lat = self.lattice;
        match self.kind {
            FrameOpKind::S => {
                let q = sample_and_spread(f, lat)?;
                let k = projection_kernel();
                ConvolutionPlan::new(&k, &f.grid).apply(&q)
            }
            FrameOpKind::T => {
                let s = analysis_point(f, lat)?;
                let lambda: Vec<Complex64> = s.iter().map(|v| v * lat.c).collect();
                synthesis(&lambda, lat, &f.grid)
            }
            FrameOpKind::R => synthesis(&analysis_mean(f, lat)?, lat, &f.grid),
        }
    }
}

/// `||f - f * F_2/pi||_2 / ||f||_2`; operators expect this to be small.
pub fn range_residual(f: &GridFunction) -> Result<f64> {
    let k = projection_kernel();
    let p = ConvolutionPlan::new(&k, &f.grid).apply(f)?;
    relative_l2(&p, f)
}

/// Solution of a Neumann iteration together with its residual history.
#[derive(Debug, Clone)]
pub struct NeumannResult {
    pub solution: GridFunction,
    /// `||f - op g_m||_2 / ||f||_2` for `m = 0, 1, ...`.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Consecutive residual increases that count as divergence.
pub const DIVERGENCE_RUN: usize = 3;

/// Tracks residuals and flags divergence.
pub(crate) fn record(history: &mut Vec<f64>, r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(CoorbitError::NonFinite("Neumann residual".into()));
    }
    history.push(r);
    let n = history.len();
    if n > DIVERGENCE_RUN && (n - DIVERGENCE_RUN - 1..n - 1).all(|m| history[m + 1] > history[m]) {
        return Err(CoorbitError::Diverged(format!(
            "residual rose {DIVERGENCE_RUN} times in a row to {r:.3e}; the lattice is too coarse"
        )));
    }
    Ok(())
}

/// Solves `op g = f` by `g_{m+1} = g_m + (f - op g_m)`, `g_0 = f`.
pub fn neumann_invert<O: LinearOperator + ?Sized>(op: &O, f: &GridFunction, tol: f64, max_iter: usize) -> Result<NeumannResult> {
    let fnorm = lp_norm(f, 2.0)?;
    let mut g = f.clone();
    let mut history = vec![];
    if fnorm == 0.0 {
        return Ok(NeumannResult { solution: g, history: vec![0.0], converged: true });
    }
    for _ in 0..max_iter.max(1) {
        let r = f.sub(&op.apply(&g)?)?;
        record(&mut history, lp_norm(&r, 2.0)? / fnorm)?;
        if *history.last().unwrap() <= tol {
            return Ok(NeumannResult { solution: g, history, converged: true });
        }
        g = g.add(&r)?;
    }
    Ok(NeumannResult { solution: g, history, converged: false })
}

/// `l_y F_2/pi` sampled on a grid.
pub fn atom_on_grid(y: AffineElement, grid: &Arc<HaarGrid>) -> Result<GridFunction> {
    let m = y.to_matrix()?;
    Ok(grid.sample_chart(|a, b| translated_atom(m, MatrixElement { a, b })))
}
