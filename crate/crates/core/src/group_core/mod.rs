//! Group elements, truncated Haar grids, quadrature and invariant derivatives.

pub mod derivative;
pub mod element;
pub mod grid;
pub mod quad;
pub mod sum;

pub use derivative::{derivative_mask, left_invariant_derivative, DerivativeSide, Generator};
pub use element::{AffineElement, MatrixElement, Su11Element};
pub use grid::{Chart, GridFunction, GridSpec, HaarGrid, Sheets};
pub use quad::{gauss_legendre, gauss_legendre_on, inner_product, lp_norm, mixed_norm, quad_integrate, relative_l2};
pub use sum::{sum_complex, sum_real, ComplexSum, CompensatedSum};
