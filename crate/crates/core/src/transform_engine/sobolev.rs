//! Sobolev norms built from invariant derivatives, and the check that
//! derivatives pass through convolution onto the analyzing vector.

use super::convolve::ConvolutionPlan;
use crate::error::{CoorbitError, Result};
use crate::group_core::derivative::{derivative_mask, left_invariant_derivative, DerivativeSide, Generator};
use crate::group_core::grid::GridFunction;
use crate::group_core::sum::CompensatedSum;
use crate::kernels::{Analyzer, Kernel, KernelKind};

/// `L^p` norm over the nodes where `mask` holds.
pub fn masked_lp_norm(f: &GridFunction, mask: &[bool], p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("need finite p >= 1, got {p}")));
    }
    let g = &*f.grid;
    let mut acc = CompensatedSum::new();
    for k in 0..g.len() {
        if mask[k] {
            acc.add(f.values[k].norm().powf(p) * g.weight(k));
        }
    }
    Ok(acc.value().powf(1.0 / p))
}

/// All generator words of length `len`.
fn words(len: usize) -> Vec<Vec<Generator>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                [Generator::X1, Generator::X2].into_iter().map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// `sum_{|w| <= m} ||X_w f||_{L^p}` over words in the generators, `m <= 2`.
///
/// The `L^p` term uses every node; derivative terms are restricted to nodes
/// whose difference points stay inside the grid.
pub fn sobolev_norm(f: &GridFunction, m: usize, p: f64, side: DerivativeSide) -> Result<f64> {
    if m > 2 {
        return Err(CoorbitError::InvalidParameter(format!("Sobolev order is limited to 2, got {m}")));
    }
    let g = &*f.grid;
    let mut mask = vec![true; g.len()];
    let mut terms: Vec<GridFunction> = vec![f.clone()];
    for len in 1..=m {
        for w in words(len) {
            let mut cur = f.clone();
            for &x in w.iter().rev() {
                let mk = derivative_mask(&cur, x, side, None);
                cur = left_invariant_derivative(&cur, x, side, None)?;
                for (a, b) in mask.iter_mut().zip(&mk) {
                    *a &= *b;
                }
            }
            terms.push(cur);
        }
    }
    if m >= 2 {
        // Second derivatives read first derivatives one step away; drop a further ring.
        let ring = derivative_ring(f, &mask);
        mask = ring;
    }
    let mut total = CompensatedSum::new();
    total.add(crate::group_core::quad::lp_norm(f, p)?);
    for t in &terms[1..] {
        total.add(masked_lp_norm(t, &mask, p)?);
    }
    Ok(total.value())
}

/// `mask` with every node adjacent to an excluded node also excluded.
fn derivative_ring(f: &GridFunction, mask: &[bool]) -> Vec<bool> {
    let g = &*f.grid;
    (0..g.len())
        .map(|k| {
            let (s, i, m) = g.unindex(k);
            let mut ok = mask[k];
            for (di, dm) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ii, mm) = (i as i64 + di, m as i64 + dm);
                if ii < 0 || mm < 0 || ii >= g.n_a() as i64 || mm >= g.n_b() as i64 {
                    ok = false;
                } else {
                    ok &= mask[g.index(s, ii as usize, mm as usize)];
                }
            }
            ok
        })
        .collect()
}

/// Result of comparing `X (f * K)` with `f * K_X`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    pub generator: Generator,
    pub residual: f64,
    pub step: f64,
    pub nodes_used: usize,
}

/// Relative `L^2` distance between `X (f * V_u u)` by finite differences and
/// `f * V_{pi(X) u} u`, over nodes whose difference points stay in the grid.
pub fn derivative_commutation_residual(
    f: &GridFunction,
    kernel: &Kernel,
    x: Generator,
    side: DerivativeSide,
    h: Option<f64>,
) -> Result<CommutationReport> {
    if !matches!(kernel.kind, KernelKind::Wavelet { analyzer: Analyzer::Mother, .. }) {
        return Err(CoorbitError::InvalidParameter("commutation check needs the wavelet kernel".into()));
    }
    let step = h.unwrap_or_else(|| crate::group_core::derivative::default_step(f, x));
    let fk = ConvolutionPlan::new(kernel, &f.grid).apply(f)?;
    let lhs = left_invariant_derivative(&fk, x, side, Some(step))?;
    let kx = kernel.with_analyzer(Analyzer::Derivative(x))?;
    let rhs = ConvolutionPlan::new(&kx, &f.grid).apply(f)?;
    let mask = derivative_mask(&fk, x, side, Some(step));
    let num = masked_lp_norm(&lhs.sub(&rhs)?, &mask, 2.0)?;
    let den = masked_lp_norm(&rhs, &mask, 2.0)?;
    let residual = if den == 0.0 { num } else { num / den };
    Ok(CommutationReport { generator: x, residual, step, nodes_used: mask.iter().filter(|&&b| b).count() })
}
