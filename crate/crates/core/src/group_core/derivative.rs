//! Derivatives along the one-parameter subgroups `exp(t X1) = (e^t, 0)` and
//! `exp(t X2) = (1, t)` (affine chart), by central differences on grid data.

use super::element::AffineElement;
use super::grid::GridFunction;
use crate::error::{CoorbitError, Result};
use num_complex::Complex64;

/// Lie algebra generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Dilation, `exp(t X1) = (e^t, 0)`.
    X1,
    /// Translation, `exp(t X2) = (1, t)`.
    X2,
}

/// Which translation the derivative differentiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSide {
    /// `d/dt f(x exp(tX))`: the left-invariant vector field. It commutes with left
    /// translations, so it passes through convolution onto the kernel.
    LeftInvariant,
    /// `d/dt f(exp(-tX) x)`: the derivative of the left regular representation.
    Regular,
}

impl Generator {
    pub fn exp(self, t: f64) -> AffineElement {
        match self {
            Generator::X1 => AffineElement { a: t.exp(), b: 0.0 },
            Generator::X2 => AffineElement { a: 1.0, b: t },
        }
    }
}

/// Default step: a quarter of the grid mesh in the coordinate the generator moves.
pub fn default_step(f: &GridFunction, x: Generator) -> f64 {
    match x {
        Generator::X1 => f.grid.d_log_a() / 4.0,
        Generator::X2 => f.grid.d_b() / 4.0,
    }
}

/// Central-difference derivative of `f` along `x`, evaluated at every node, with
/// bilinear interpolation off the nodes. Points leaving the domain read zero.
pub fn left_invariant_derivative(
    f: &GridFunction,
    x: Generator,
    side: DerivativeSide,
    h: Option<f64>,
) -> Result<GridFunction> {
    use rayon::prelude::*;
    let h = h.unwrap_or_else(|| default_step(f, x));
    if !(h > 0.0) || !h.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let g = &f.grid;
    let (plus, minus) = (x.exp(h), x.exp(-h));
    let values = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let node = g.affine_node(k);
            let (fwd, bwd) = match side {
                DerivativeSide::LeftInvariant => (node.compose(plus), node.compose(minus)),
                DerivativeSide::Regular => (minus.compose(node), plus.compose(node)),
            };
            (f.interpolate_at(fwd) - f.interpolate_at(bwd)) / (2.0 * h)
        })
        .collect::<Vec<Complex64>>();
    Ok(GridFunction { grid: g.clone(), values })
}

/// Nodes whose two difference points both lie inside the grid domain; the
/// derivative at the remaining nodes reads zero-extended data.
pub fn derivative_mask(f: &GridFunction, x: Generator, side: DerivativeSide, h: Option<f64>) -> Vec<bool> {
    let h = h.unwrap_or_else(|| default_step(f, x));
    let g = &f.grid;
    let (plus, minus) = (x.exp(h), x.exp(-h));
    (0..g.len())
        .map(|k| {
            let node = g.affine_node(k);
            let (fwd, bwd) = match side {
                DerivativeSide::LeftInvariant => (node.compose(plus), node.compose(minus)),
                DerivativeSide::Regular => (minus.compose(node), plus.compose(node)),
            };
            [fwd, bwd].iter().all(|p| match g.from_affine(*p) {
                Some((u, v)) => g.contains(u, v),
                None => false,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::{GridSpec, HaarGrid, Sheets};

    fn interior(f: &GridFunction, k: usize) -> bool {
        let (_, i, m) = f.grid.unindex(k);
        i > 2 && i + 3 < f.grid.n_a() && m > 2 && m + 3 < f.grid.n_b()
    }

    #[test]
    fn regular_side_examples() {
        let g = HaarGrid::new(GridSpec::affine(Sheets::Positive, 0.5, 2.0, 41, 4.0, 81)).unwrap();
        let log_a = g.sample_chart(|x, _| Complex64::new(x.ln(), 0.0));
        let d = left_invariant_derivative(&log_a, Generator::X1, DerivativeSide::Regular, None).unwrap();
        let bcoord = g.sample_chart(|_, y| Complex64::new(y, 0.0));
        let d2 = left_invariant_derivative(&bcoord, Generator::X2, DerivativeSide::Regular, None).unwrap();
        for k in 0..g.len() {
            if interior(&d, k) {
                assert!((d.values[k].re + 1.0).abs() < 1e-9);
                assert!((d2.values[k].re + 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn left_invariant_side_examples() {
        let g = HaarGrid::new(GridSpec::affine(Sheets::Positive, 0.5, 2.0, 41, 4.0, 81)).unwrap();
        let log_a = g.sample_chart(|x, _| Complex64::new(x.ln(), 0.0));
        let d = left_invariant_derivative(&log_a, Generator::X1, DerivativeSide::LeftInvariant, None).unwrap();
        let bcoord = g.sample_chart(|_, y| Complex64::new(y, 0.0));
        let d2 = left_invariant_derivative(&bcoord, Generator::X2, DerivativeSide::LeftInvariant, None).unwrap();
        for k in 0..g.len() {
            if interior(&d, k) {
                let (a, _) = g.coords(k);
                assert!((d.values[k].re - 1.0).abs() < 1e-9);
                assert!((d2.values[k].re - a).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_step() {
        let g = HaarGrid::new(GridSpec::matrix(0.5, 2.0, 5, 1.0, 5)).unwrap();
        let f = g.zeros();
        assert!(left_invariant_derivative(&f, Generator::X1, DerivativeSide::Regular, Some(0.0)).is_err());
    }
}
