//! Reconstruction from lattice samples, carried out in the span of the atoms.
//!
//! Atoms `e_i = l_{x_i} F_2/pi` have exact inner products
//! `<e_i, e_j> = F_2(x_i^{-1} x_j) / pi` on the whole group, so norms of
//! finite combinations and the action of `T` need no quadrature.

use super::lattice::AtomicLattice;
use super::operators::{f2_hat, record, synthesis, translated_atom};
use crate::group_core::quad::relative_l2;
use crate::error::{CoorbitError, Result};
use crate::group_core::element::MatrixElement;
use crate::group_core::grid::{GridFunction, HaarGrid};
use crate::group_core::sum::ComplexSum;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// `gt[i n + j] = <e_j, e_i> = F_2(x_j^{-1} x_i) / pi`.
pub struct Gram {
    n: usize,
    gt: Vec<Complex64>,
}

impl Gram {
    pub fn new(lat: &AtomicLattice) -> Gram {
        let n = lat.len();
        let pts: Vec<MatrixElement> = lat.points.iter().map(|p| p.m).collect();
        let gt = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let xi = pts[i];
                pts.iter().map(move |xj| f2_hat(xj.inv_compose(xi))).collect::<Vec<_>>()
            })
            .collect();
        Gram { n, gt }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Values `(sum_j v_j e_j)(x_i)`.
    pub fn evaluate(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.gt
            .par_chunks(self.n)
            .map(|row| {
                let mut s = ComplexSum::new();
                for (g, x) in row.iter().zip(v) {
                    s.add(g * x);
                }
                s.value()
            })
            .collect()
    }

    /// `||sum_j v_j e_j||_{L^2(G)}`.
    pub fn norm(&self, v: &[Complex64]) -> f64 {
        let w = self.evaluate(v);
        let mut s = ComplexSum::new();
        for (a, b) in v.iter().zip(&w) {
            s.add(a.conj() * b);
        }
        s.value().re.max(0.0).sqrt()
    }
}

/// Coefficients of `T (sum_j v_j e_j) = sum_i c (sum_j v_j e_j)(x_i) e_i`.
pub fn apply_t(lat: &AtomicLattice, gram: &Gram, v: &[Complex64]) -> Vec<Complex64> {
    gram.evaluate(v).into_iter().map(|z| z * lat.c).collect()
}

/// `||(I - T) l_y F_2/pi||_2 / ||l_y F_2/pi||_2` for each probe point, exact on the whole group.
pub fn identity_minus_t(lat: &AtomicLattice, gram: &Gram, probes: &[MatrixElement]) -> Vec<f64> {
    let e = f2_hat(MatrixElement::IDENTITY).re;
    probes
        .iter()
        .map(|y| {
            // <l_y, e_i> = F(y^{-1} x_i); T l_y has coefficients t_i = c F(y^{-1} x_i).
            let cross: Vec<Complex64> = lat.points.iter().map(|p| f2_hat(y.inv_compose(p.m))).collect();
            let t: Vec<Complex64> = cross.iter().map(|z| z * lat.c).collect();
            let tt = gram.norm(&t).powi(2);
            let mut yt = ComplexSum::new();
            for (a, b) in t.iter().zip(&cross) {
                yt.add(a.conj() * b);
            }
            let d2 = e - 2.0 * yt.value().re + tt;
            (d2.max(0.0) / e).sqrt()
        })
        .collect()
}

/// Outcome of inverting `T` on the span of the atoms.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// Coefficients of the reconstruction in the atoms.
    pub coeffs: Vec<Complex64>,
    /// `||h - T g_m||_2 / ||h||_2` with `h = T f`, exact in `L^2(G)`.
    pub history: Vec<f64>,
    pub converged: bool,
}

impl Reconstruction {
    pub fn iterations(&self) -> usize {
        self.history.len()
    }

    /// Largest ratio of consecutive residuals.
    pub fn max_ratio(&self) -> f64 {
        self.history.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
    }

    /// Geometric-mean ratio over the last `k` steps.
    pub fn tail_rate(&self, k: usize) -> f64 {
        let n = self.history.len();
        if n < 2 {
            return 0.0;
        }
        let k = k.min(n - 1);
        (self.history[n - 1] / self.history[n - 1 - k]).powf(1.0 / k as f64)
    }

    pub fn on_grid(&self, lat: &AtomicLattice, grid: &Arc<HaarGrid>) -> Result<GridFunction> {
        synthesis(&self.coeffs, lat, grid)
    }
}

/// Relative `L^2(grid)` distance between the reconstruction and `l_target F_2/pi`.
pub fn reconstruction_error(rec: &Reconstruction, lat: &AtomicLattice, target: MatrixElement, grid: &Arc<HaarGrid>) -> Result<f64> {
    let got = rec.on_grid(lat, grid)?;
    let truth = grid.sample_chart(|a, b| translated_atom(target, MatrixElement { a, b }));
    relative_l2(&got, &truth)
}

/// Recovers `f` from `(f(x_i))`: forms `h = sum_i c f(x_i) e_i` and applies
/// `T^{-1}` by the Neumann iteration `g_{m+1} = g_m + (h - T g_m)`, `g_0 = h`.
pub fn atomic_reconstruct(
    samples: &[Complex64],
    lat: &AtomicLattice,
    gram: &Gram,
    tol: f64,
    max_iter: usize,
) -> Result<Reconstruction> {
    if samples.len() != lat.len() || gram.len() != lat.len() {
        return Err(CoorbitError::InvalidParameter("sample count does not match the lattice".into()));
    }
    if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CoorbitError::NonFinite("lattice samples".into()));
    }
    let h: Vec<Complex64> = samples.iter().map(|z| z * lat.c).collect();
    let hn = gram.norm(&h);
    let mut lambda = h.clone();
    let mut history = vec![];
    if hn == 0.0 {
        return Ok(Reconstruction { coeffs: lambda, history: vec![0.0], converged: true });
    }
    for _ in 0..max_iter.max(1) {
        let tg = apply_t(lat, gram, &lambda);
        let r: Vec<Complex64> = h.iter().zip(&tg).map(|(a, b)| a - b).collect();
        record(&mut history, gram.norm(&r) / hn)?;
        if *history.last().unwrap() <= tol {
            return Ok(Reconstruction { coeffs: lambda, history, converged: true });
        }
        for (l, d) in lambda.iter_mut().zip(&r) {
            *l += d;
        }
    }
    Ok(Reconstruction { coeffs: lambda, history, converged: false })
}

#[cfg(test)]
mod tests {
    use super::super::lattice::{build_lattice, IndexRanges, Region};
    use super::super::operators::{atom_on_grid, FrameOpKind, FrameOperator, LinearOperator};
    use super::*;
    use crate::group_core::grid::GridSpec;
    use crate::group_core::quad::{inner_product, relative_l2};

    fn setup() -> (Arc<HaarGrid>, AtomicLattice) {
        let g = HaarGrid::new(GridSpec::matrix(0.25, 4.0, 65, 8.0, 129)).unwrap();
        let lat = build_lattice(2f64.powf(0.25), 0.25, Region::new(0.5, 2.0, 4.0).unwrap(), IndexRanges::default(), &g)
            .unwrap();
        (g, lat)
    }

    #[test]
    fn gram_inner_products_match_quadrature() {
        // A wide grid approximates the whole-group inner product.
        let g = HaarGrid::new(GridSpec::matrix(1.0 / 64.0, 64.0, 129, 64.0, 513)).unwrap();
        let (x, y) = (MatrixElement { a: 1.1, b: 0.3 }, MatrixElement { a: 0.8, b: -0.5 });
        let ex = atom_on_grid(x.to_affine(), &g).unwrap();
        let ey = atom_on_grid(y.to_affine(), &g).unwrap();
        let q = inner_product(&ex, &ey).unwrap();
        let exact = f2_hat(x.inv_compose(y));
        assert!((q - exact).norm() < 2e-2 * exact.norm(), "{q} {exact}");
    }

    #[test]
    fn span_t_matches_grid_t() {
        let (g, lat) = setup();
        let mut v = vec![Complex64::new(0.0, 0.0); lat.len()];
        v[lat.find(0, 0).unwrap()] = Complex64::new(1.0, 0.5);
        v[lat.find(1, 2).unwrap()] = Complex64::new(-0.3, 0.2);
        let gram = Gram::new(&lat);
        let span = synthesis(&apply_t(&lat, &gram, &v), &lat, &g).unwrap();
        let grid_t = FrameOperator { kind: FrameOpKind::T, lattice: &lat }.apply(&synthesis(&v, &lat, &g).unwrap()).unwrap();
        // Grid T reads samples by interpolation at lattice points that are not nodes.
        assert!(relative_l2(&grid_t, &span).unwrap() < 2e-2);
    }

    #[test]
    fn atoms_are_recovered() {
        let (_, lat) = setup();
        let gram = Gram::new(&lat);
        let y = MatrixElement { a: 1.05, b: 0.2 };
        let s: Vec<Complex64> = lat.points.iter().map(|p| f2_hat(y.inv_compose(p.m))).collect();
        let r = atomic_reconstruct(&s, &lat, &gram, 1e-3, 200).unwrap();
        assert!(r.converged);
        assert!(r.max_ratio() < 1.0);
        let z = atomic_reconstruct(&vec![Complex64::new(0.0, 0.0); lat.len()], &lat, &gram, 1e-3, 10).unwrap();
        assert!(z.coeffs.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn probe_defect_below_one() {
        let (_, lat) = setup();
        let gram = Gram::new(&lat);
        let d = identity_minus_t(&lat, &gram, &[MatrixElement::IDENTITY, MatrixElement { a: 1.2, b: -0.7 }]);
        assert!(d.iter().all(|&x| x > 0.0 && x < 1.0), "{d:?}");
    }
}
