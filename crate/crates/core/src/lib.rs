//! Coorbit spaces on the affine (ax+b) group.
//!
//! The crate provides the numerical pieces needed to work with reproducing
//! kernels on the affine group: Haar quadrature on truncated grids
//! ([`group_core`]), discrete-series and wavelet kernels ([`kernels`]),
//! group convolution and norm estimates ([`transform_engine`]), atomic
//! decompositions from lattice samples ([`atomic_decomp`]) and bandlimited
//! sampling on cyclic, finite and real-line groups ([`gelfand_sampling`]).

pub mod error;
pub mod group_core;
pub mod io;
pub mod kernels;
pub mod transform_engine;
pub mod atomic_decomp;
pub mod gelfand_sampling;

pub use error::{CoorbitError, Result};
pub use num_complex::Complex64;
