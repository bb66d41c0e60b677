//! Hyperbolic lattices with a partition of unity by translated hat functions.

use super::osc::{osc_bound, OscWindow};
use crate::error::{CoorbitError, Result};
use crate::group_core::element::{AffineElement, MatrixElement};
use crate::group_core::grid::{Chart, HaarGrid};
use crate::group_core::quad::gauss_legendre_on;
use crate::group_core::sum::CompensatedSum;

/// Box of the matrix chart, `a in [a_min, a_max]`, `|b| <= b_max`, that the atoms must cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub a_min: f64,
    pub a_max: f64,
    pub b_max: f64,
}

impl Region {
    pub fn new(a_min: f64, a_max: f64, b_max: f64) -> Result<Self> {
        if !(a_min > 0.0 && a_max > a_min && b_max > 0.0) || !a_max.is_finite() || !b_max.is_finite() {
            return Err(CoorbitError::InvalidParameter(format!("bad region ({a_min}, {a_max}, {b_max})")));
        }
        Ok(Region { a_min, a_max, b_max })
    }

    pub fn contains(&self, g: MatrixElement) -> bool {
        let tol = 1e-12;
        g.a >= self.a_min * (1.0 - tol) && g.a <= self.a_max * (1.0 + tol) && g.b.abs() <= self.b_max * (1.0 + tol)
    }
}

/// `count` reproducible points of the region, log-uniform in `a` and uniform in `b`.
pub fn probe_points(region: &Region, count: usize, seed: u64) -> Vec<MatrixElement> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (l0, l1) = (region.a_min.ln(), region.a_max.ln());
    (0..count)
        .map(|_| {
            let a = rng.gen_range(l0..=l1).exp();
            MatrixElement { a, b: rng.gen_range(-region.b_max..=region.b_max) }
        })
        .collect()
}

/// Optional restriction of the lattice indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IndexRanges {
    pub j: Option<(i64, i64)>,
    pub k: Option<(i64, i64)>,
}

/// One lattice point `x_{j,k} = (a0^j, a0^j b0 k)` in the affine chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub j: i64,
    pub k: i64,
    pub x: AffineElement,
    pub m: MatrixElement,
}

/// Lattice, partition of unity and the constants attached to it.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicLattice {
    pub a0: f64,
    pub b0: f64,
    pub region: Region,
    pub points: Vec<LatticePoint>,
    /// Window containing the support of every `x_i^{-1} psi_i`.
    pub window: OscWindow,
    /// `int psi_i` in the matrix-chart Haar measure; the same for every atom.
    pub c: f64,
    pub c_closed_form: f64,
    pub eps: f64,
    /// `(1 - eps, 1 + eps)` when `eps < 1`.
    pub constants: Option<(f64, f64)>,
}

fn hat(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

impl AtomicLattice {
    fn ln_a0(&self) -> f64 {
        self.a0.ln()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lattice coordinates `(log_{a0} A - j, B / (b0 a0^j) - k)` of `g` relative to atom `(j, k)`.
    fn local(&self, j: i64, k: i64, g: AffineElement) -> (f64, f64) {
        let s = self.a0.powi(j as i32);
        (g.a.ln() / self.ln_a0() - j as f64, g.b / (self.b0 * s) - k as f64)
    }

    /// `psi_i(g)`; zero on the negative sheet.
    pub fn psi(&self, i: usize, g: AffineElement) -> f64 {
        if g.a <= 0.0 {
            return 0.0;
        }
        let p = &self.points[i];
        let (u, v) = self.local(p.j, p.k, g);
        hat(u) * hat(v)
    }

    /// Sum of all hats at `g`, over all integer indices (not only the kept ones).
    pub fn partition_sum(&self, g: AffineElement) -> f64 {
        if g.a <= 0.0 {
            return 0.0;
        }
        let u = g.a.ln() / self.ln_a0();
        let j0 = u.floor() as i64;
        let mut s = 0.0;
        for j in [j0, j0 + 1] {
            let wj = hat(u - j as f64);
            if wj == 0.0 {
                continue;
            }
            let v = g.b / (self.b0 * self.a0.powi(j as i32));
            let k0 = v.floor() as i64;
            s += wj * (hat(v - k0 as f64) + hat(v - (k0 + 1) as f64));
        }
        s
    }

    /// Indices of kept atoms whose support contains `g`.
    pub fn atoms_at(&self, g: AffineElement) -> Vec<usize> {
        if g.a <= 0.0 {
            return vec![];
        }
        let u = g.a.ln() / self.ln_a0();
        let j0 = u.floor() as i64;
        let mut out = vec![];
        for j in [j0, j0 + 1] {
            let v = g.b / (self.b0 * self.a0.powi(j as i32));
            let k0 = v.floor() as i64;
            for k in [k0, k0 + 1] {
                if let Some(i) = self.find(j, k) {
                    if self.psi(i, g) > 0.0 {
                        out.push(i);
                    }
                }
            }
        }
        out
    }

    /// Position of atom `(j, k)`; points are sorted by `(j, k)`.
    pub fn find(&self, j: i64, k: i64) -> Option<usize> {
        self.points.binary_search_by(|p| (p.j, p.k).cmp(&(j, k))).ok()
    }

    /// `(log A, B)` box of `x_i V` with `V = (a0^{-1/2}, a0^{1/2}) x (-beta0, beta0)`, `V^2` inside the support window.
    fn separation_box(&self, i: usize) -> (f64, f64, f64, f64) {
        let p = &self.points[i];
        let beta0 = self.b0 / (1.0 + self.a0.sqrt());
        let l = p.x.a.ln();
        let h = 0.5 * self.ln_a0();
        (l - h, l + h, p.x.b - p.x.a * beta0, p.x.b + p.x.a * beta0)
    }

    /// Pairs of index neighbours whose `V`-boxes overlap.
    pub fn separation_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = vec![];
        for (i, p) in self.points.iter().enumerate() {
            let bi = self.separation_box(i);
            for (dj, dk) in [(0i64, 1i64), (1, -1), (1, 0), (1, 1)] {
                let j = p.j + dj;
                // Neighbouring row: the nearest columns under the change of scale.
                let centre = if dj == 0 { p.k + dk } else { (p.k as f64 / self.a0).round() as i64 + dk };
                if let Some(o) = self.find(j, centre) {
                    let bo = self.separation_box(o);
                    // Open boxes; shared faces are not an overlap.
                    let t = 1e-12 * (1.0 + bi.3.abs() + bo.3.abs());
                    let overlap = bi.0 < bo.1 - t && bo.0 < bi.1 - t && bi.2 < bo.3 - t && bo.2 < bi.3 - t;
                    if overlap {
                        bad.push((i, o));
                    }
                }
            }
        }
        bad
    }

    /// Nodes of `grid` inside the region that lie in no kept atom's support window.
    pub fn uncovered_nodes(&self, grid: &HaarGrid) -> Vec<usize> {
        (0..grid.len())
            .filter(|&k| {
                let (x, y) = grid.coords(k);
                if x <= 0.0 || !self.region.contains(MatrixElement { a: x, b: y }) {
                    return false;
                }
                let g = grid.to_affine(x, y);
                let u = g.a.ln() / self.ln_a0();
                let j = u.round() as i64;
                let kk = (g.b / (self.b0 * self.a0.powi(j as i32))).round() as i64;
                match self.find(j, kk) {
                    Some(i) => {
                        let local = self.points[i].x.inv_compose(g);
                        let m = MatrixElement { a: local.a.sqrt(), b: local.b / local.a.sqrt() };
                        !self.window.contains(m)
                    }
                    None => true,
                }
            })
            .collect()
    }
}

/// `int hat(log_{a0} A) hat(B / b0) dA dB / (2 A^2)` by Gauss-Legendre on each linear piece.
fn reference_cell_mass(a0: f64, b0: f64) -> f64 {
    let l = a0.ln();
    let mut acc = CompensatedSum::new();
    for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
        let (t, w) = gauss_legendre_on(24, lo, hi);
        for (u, wu) in t.iter().zip(&w) {
            // A = a0^u, dA / A^2 = l a0^{-u} du; the B integral of the hat is b0.
            acc.add(wu * hat(*u) * l * (-l * u).exp() * b0 * 0.5);
        }
    }
    acc.value()
}

/// Builds the lattice over `region`.
///
/// Atoms are kept when their support meets the region and their centre is a
/// node-domain point of `grid`. The partition of unity is
/// `psi_{j,k}(A, B) = hat(log_{a0} A - j) hat(B / (b0 a0^j) - k)`, a left
/// translate of `psi_{0,0}` by `x_{j,k}`.
pub fn build_lattice(a0: f64, b0: f64, region: Region, ranges: IndexRanges, grid: &HaarGrid) -> Result<AtomicLattice> {
    if !(a0 > 1.0) || !(b0 > 0.0) || !a0.is_finite() || !b0.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("lattice needs a0 > 1 and b0 > 0, got ({a0}, {b0})")));
    }
    if grid.chart() != Chart::Matrix {
        return Err(CoorbitError::InvalidGrid("lattices are built on matrix-chart grids".into()));
    }
    let (lo, hi) = (grid.a_nodes()[0], grid.a_nodes()[grid.n_a() - 1]);
    if region.a_min < lo * (1.0 - 1e-12) || region.a_max > hi * (1.0 + 1e-12) || region.b_max > grid.spec().b_max * (1.0 + 1e-12) {
        return Err(CoorbitError::InvalidParameter("atomic region must lie inside the grid".into()));
    }
    let l = a0.ln();
    // Affine dilations of the region are A = a^2.
    let (big_lo, big_hi) = (region.a_min * region.a_min, region.a_max * region.a_max);
    let mut j_lo = (big_lo.ln() / l).floor() as i64 - 1;
    let mut j_hi = (big_hi.ln() / l).ceil() as i64 + 1;
    if let Some((lo, hi)) = ranges.j {
        j_lo = j_lo.max(lo);
        j_hi = j_hi.min(hi);
    }
    let mut points = vec![];
    for j in j_lo..=j_hi {
        let s = a0.powi(j as i32);
        // Support in A is (s / a0, s a0); it must meet the region's A range.
        let (ta, tb) = ((s / a0).max(big_lo), (s * a0).min(big_hi));
        if ta >= tb {
            continue;
        }
        // Largest |B| the region allows on that A range.
        let b_lim = region.b_max * tb.sqrt();
        let mut k_hi = (b_lim / (b0 * s)).floor() as i64 + 1;
        let mut k_lo = -k_hi;
        if let Some((lo, hi)) = ranges.k {
            k_lo = k_lo.max(lo);
            k_hi = k_hi.min(hi);
        }
        for k in k_lo..=k_hi {
            let x = AffineElement { a: s, b: s * b0 * k as f64 };
            let m = MatrixElement { a: s.sqrt(), b: x.b / s.sqrt() };
            if grid.contains(m.a, m.b) {
                points.push(LatticePoint { j, k, x, m });
            }
        }
    }
    if points.is_empty() {
        return Err(CoorbitError::NotCovering("no lattice point lies in the grid".into()));
    }
    let window = OscWindow::new(a0.sqrt(), b0 * a0.sqrt())?;
    let eps = osc_bound(&window);
    let lat = AtomicLattice {
        a0,
        b0,
        region,
        points,
        window,
        c: reference_cell_mass(a0, b0),
        c_closed_form: b0 * (l.cosh() - 1.0) / l,
        eps,
        constants: if eps < 1.0 { Some((1.0 - eps, 1.0 + eps)) } else { None },
    };
    let uncovered = lat.uncovered_nodes(grid);
    if !uncovered.is_empty() {
        let list: Vec<String> = uncovered
            .iter()
            .take(10)
            .map(|&k| {
                let (x, y) = grid.coords(k);
                format!("({x:.4}, {y:.4})")
            })
            .collect();
        return Err(CoorbitError::NotCovering(format!("{} nodes uncovered, e.g. {}", uncovered.len(), list.join(" "))));
    }
    let bad = lat.separation_violations();
    if !bad.is_empty() {
        let list: Vec<String> = bad
            .iter()
            .take(10)
            .map(|&(i, o)| {
                let (p, q) = (&lat.points[i], &lat.points[o]);
                format!("({},{})~({},{})", p.j, p.k, q.j, q.k)
            })
            .collect();
        return Err(CoorbitError::InvalidParameter(format!("lattice is not separated: {}", list.join(" "))));
    }
    Ok(lat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::GridSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (std::sync::Arc<HaarGrid>, AtomicLattice) {
        let g = HaarGrid::new(GridSpec::matrix(0.25, 4.0, 41, 8.0, 81)).unwrap();
        let r = Region::new(0.5, 2.0, 4.0).unwrap();
        let lat = build_lattice(2f64.powf(0.25), 0.25, r, IndexRanges::default(), &g).unwrap();
        (g, lat)
    }

    #[test]
    fn cell_mass_matches_closed_form() {
        let (_, lat) = setup();
        assert!((lat.c - lat.c_closed_form).abs() < 1e-13 * lat.c, "{} {}", lat.c, lat.c_closed_form);
        assert!(lat.c > 0.0);
    }

    #[test]
    fn hats_sum_to_one() {
        let (_, lat) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a: f64 = rng.gen_range(0.5f64.ln()..2f64.ln());
            let m = MatrixElement { a: a.exp(), b: rng.gen_range(-4.0..4.0) };
            let g = m.to_affine();
            assert!((lat.partition_sum(g) - 1.0).abs() < 1e-10);
            let kept: f64 = lat.atoms_at(g).iter().map(|&i| lat.psi(i, g)).sum();
            assert!((kept - 1.0).abs() < 1e-10, "{m:?}");
        }
    }

    #[test]
    fn supports_sit_in_window() {
        let (_, lat) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let i = rng.gen_range(0..lat.len());
            let p = lat.points[i];
            let local = AffineElement { a: lat.a0.powf(rng.gen_range(-1.2..1.2)), b: rng.gen_range(-1.5..1.5) * lat.b0 };
            let g = p.x.compose(local);
            if lat.psi(i, g) > 0.0 {
                let m = MatrixElement { a: local.a.sqrt(), b: local.b / local.a.sqrt() };
                assert!(lat.window.contains(m));
            }
        }
    }

    #[test]
    fn separated_and_dense() {
        let (g, lat) = setup();
        assert!(lat.separation_violations().is_empty());
        assert!(lat.uncovered_nodes(&g).is_empty());
        let r = Region::new(0.5, 8.0, 4.0).unwrap();
        assert!(build_lattice(2f64.powf(0.25), 0.25, r, IndexRanges::default(), &g).is_err());
        let r = Region::new(0.5, 2.0, 4.0).unwrap();
        let narrow = IndexRanges { j: None, k: Some((-2, 2)) };
        assert!(matches!(build_lattice(2f64.powf(0.25), 0.25, r, narrow, &g), Err(CoorbitError::NotCovering(_))));
    }

    #[test]
    fn reference_lattice_window_is_too_large() {
        let (_, lat) = setup();
        assert!(lat.eps > 1.0 && lat.constants.is_none());
        let g = HaarGrid::new(GridSpec::matrix(0.25, 4.0, 41, 8.0, 81)).unwrap();
        let fine = build_lattice(2f64.powf(1.0 / 16.0), 1.0 / 16.0, Region::new(0.9, 1.1, 0.5).unwrap(), IndexRanges::default(), &g).unwrap();
        assert!(fine.eps < 0.3 && fine.constants.is_some());
    }
}
