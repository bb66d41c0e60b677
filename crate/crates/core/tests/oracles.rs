//! Closed-form values checked against the numerical routines.

use coorbit_core::gelfand_sampling::{plancherel_sides, FiniteGroupSpec};
use coorbit_core::group_core::gauss_legendre_on;
use coorbit_core::kernels::{f2_at, kernel_normalize, Kernel};
use coorbit_core::group_core::{GridSpec, HaarGrid};
use coorbit_core::transform_engine::{lp_finiteness_scan, weighted_f2_constant, weighted_f2_integral, dp_bound};
use coorbit_core::Complex64;
use std::f64::consts::PI;

#[test]
fn f2_peak_and_l2_norm() {
    assert!((f2_at(1.0, 0.0) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    let scan = lp_finiteness_scan(2, 2.0, 20).unwrap();
    let last = scan.rows.last().unwrap().value;
    assert!((last - (PI / 2.0).sqrt()).abs() < 1e-9, "{last}");
}

#[test]
fn weighted_integral_matches_closed_form() {
    for eps in [0.5, 1.0, 1.5] {
        let scan = weighted_f2_integral(eps, 20).unwrap();
        let v = scan.rows.last().unwrap().value;
        let c = weighted_f2_constant(eps).unwrap();
        assert!((v - c).abs() < 1e-3 * c, "eps {eps}: {v} vs {c}");
    }
}

#[test]
fn dp_bound_at_two() {
    let b = dp_bound(2.0, PI).unwrap();
    assert!((b - PI * 2f64.sqrt()).abs() < 1e-12, "{b}");
}

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    let (x, w) = gauss_legendre_on(8, 0.0, 2.0);
    let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(15)).sum();
    assert!((s - 2f64.powi(16) / 16.0).abs() < 1e-9);
}

#[test]
fn s3_plancherel_on_a_delta() {
    let g = FiniteGroupSpec::s3();
    let mut f = vec![Complex64::new(0.0, 0.0); 6];
    f[2] = Complex64::new(1.0, 0.0);
    let (lhs, rhs) = plancherel_sides(&g, &f);
    assert!((lhs - rhs).abs() < 1e-14);
}

#[test]
fn f2_normalization_approaches_pi() {
    let grid = HaarGrid::new(GridSpec::matrix(1.0 / 64.0, 64.0, 129, 64.0, 257)).unwrap();
    let (kappa, _) = kernel_normalize(&Kernel::discrete_series(2).unwrap(), &grid).unwrap();
    assert!((kappa - PI).abs() < 0.05, "{kappa}");
}
