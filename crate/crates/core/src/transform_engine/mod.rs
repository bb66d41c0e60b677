//! Group convolution, integrability scans, operator-norm estimates and the
//! norms used to define coorbit spaces.

pub mod besov;
pub mod convolve;
pub mod coorbit;
pub mod dp;
pub mod scans;
pub mod sobolev;

pub use besov::{besov_norm_coorbit, besov_norm_lp, besov_tail_fraction, lp_window, BesovSpec};
pub use convolve::{
    group_convolve, idempotency_residual, normalize_idempotent, reproducing_residual, IDEMPOTENCY_TOL, ConvolutionPlan, GridKernel, GroupKernel,
};
pub use coorbit::{
    bergman_compare, coorbit_norm_poly, coorbit_norm_wavelet, voice_discrete_series_grid, BergmanComparison,
    NormSpec, PolyVector,
};
pub use dp::{dp_bound, dp_estimate, DpEstimate, DP_ITERATIONS};
pub use scans::{lp_finiteness_scan, CONVERGENCE_THRESHOLD, weighted_f2_constant, weighted_f2_integral, Scan, ScanRow, Verdict};
pub use sobolev::{derivative_commutation_residual, masked_lp_norm, sobolev_norm, CommutationReport};
