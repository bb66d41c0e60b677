//! Operator norm of `f -> f * F_2 / kappa` on `L^p(G)`.

use super::convolve::ConvolutionPlan;
use super::scans::weighted_f2_constant;
use crate::error::{CoorbitError, Result};
use crate::group_core::grid::{GridFunction, HaarGrid};
use crate::group_core::quad::lp_norm;
use crate::kernels::{Kernel, KernelKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Analytic bound and power-iteration estimate for one exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct DpEstimate {
    pub p: f64,
    pub bound: f64,
    pub empirical: f64,
    /// Estimate after each iteration.
    pub history: Vec<f64>,
}

/// Iterations of the power method.
pub const DP_ITERATIONS: usize = 20;

/// Bound from the weighted Schur test: with `1/p + 1/q = 1`,
/// `(C_{1/p}^{p/q} C_{1/q})^{1/p} / kappa`.
pub fn dp_bound(p: f64, kappa: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("need 1 < p < inf, got {p}")));
    }
    let q = p / (p - 1.0);
    let c_p = weighted_f2_constant(1.0 / p)?;
    let c_q = weighted_f2_constant(1.0 / q)?;
    Ok((c_p.powf(p / q) * c_q).powf(1.0 / p) / kappa)
}

/// `|z|^(r-1) z / |z|`, the duality map of `l^r` up to normalization.
fn duality(f: &GridFunction, r: f64) -> GridFunction {
    f.map(|z| {
        let m = z.norm();
        if m == 0.0 {
            z
        } else {
            z * m.powf(r - 2.0)
        }
    })
}

/// Power-method lower estimate of the `L^p` operator norm of convolution with
/// the normalized discrete-series kernel on `grid`, together with the analytic
/// bound.
///
/// The iteration alternates the operator and its adjoint through the duality
/// maps of `L^p` and `L^q`; the kernel satisfies `K(g^{-1}) = conj K(g)`, so
/// the adjoint is the operator itself.
pub fn dp_estimate(p: f64, kernel: &Kernel, grid: &Arc<HaarGrid>, seed: u64) -> Result<DpEstimate> {
    if !matches!(kernel.kind, KernelKind::DiscreteSeries { n: 2 }) {
        return Err(CoorbitError::InvalidParameter("the D_p estimate is defined for the F_2 kernel".into()));
    }
    let bound = dp_bound(p, kernel.kappa)?;
    let q = p / (p - 1.0);
    let plan = ConvolutionPlan::new(kernel, grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len()).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let mut x = GridFunction::new(Arc::clone(grid), values)?;
    x = x.scale(Complex64::new(1.0 / lp_norm(&x, p)?, 0.0));
    let mut history = Vec::with_capacity(DP_ITERATIONS);
    for _ in 0..DP_ITERATIONS {
        let y = plan.apply(&x)?;
        let ny = lp_norm(&y, p)?;
        history.push(ny);
        if ny == 0.0 {
            break;
        }
        let z = plan.apply(&duality(&y, p))?;
        let xn = duality(&z, q);
        let nx = lp_norm(&xn, p)?;
        if nx == 0.0 {
            break;
        }
        x = xn.scale(Complex64::new(1.0 / nx, 0.0));
    }
    let empirical = history.iter().cloned().fold(0.0, f64::max);
    Ok(DpEstimate { p, bound, empirical, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::GridSpec;

    #[test]
    fn bound_is_symmetric_in_the_exponent_pair() {
        // C_{1/p}^{1/q} C_{1/q}^{1/p} is symmetric under p <-> q.
        let a = dp_bound(1.5, 1.0).unwrap();
        let b = dp_bound(3.0, 1.0).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        // p = 2: C_{1/2} = pi^2 sqrt 2.
        let c2 = dp_bound(2.0, 1.0).unwrap();
        assert!((c2 - std::f64::consts::PI.powi(2) * 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn power_iteration_is_deterministic() {
        let g = HaarGrid::new(GridSpec::matrix(0.25, 4.0, 9, 4.0, 17)).unwrap();
        let k = Kernel { kappa: std::f64::consts::PI, ..Kernel::discrete_series(2).unwrap() };
        let a = dp_estimate(2.0, &k, &g, 7).unwrap();
        let b = dp_estimate(2.0, &k, &g, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.empirical > 0.0 && a.empirical <= a.bound);
    }
}
