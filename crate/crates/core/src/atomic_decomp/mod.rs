//! Discretization by lattices: oscillation estimates, partitions of unity,
//! frame operators and reconstruction from samples.

pub mod lattice;
pub mod operators;
pub mod osc;
pub mod reconstruct;

pub use lattice::{build_lattice, probe_points, AtomicLattice, IndexRanges, LatticePoint, Region};
pub use operators::{
    analysis_mean, analysis_point, atom_on_grid, f2_hat, lattice_samples, neumann_invert, projection_kernel,
    range_residual, synthesis, translated_atom, FrameOpKind, FrameOperator, Identity, LinearOperator, NeumannResult,
    DIVERGENCE_RUN,
};
pub use osc::{corollary_constants, osc_bound, osc_measure, ratio_range, OscWindow};
pub use reconstruct::{apply_t, atomic_reconstruct, identity_minus_t, reconstruction_error, Gram, Reconstruction};
