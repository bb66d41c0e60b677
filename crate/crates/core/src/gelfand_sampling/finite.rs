//! Finite groups given by a multiplication table and unitary irreducible
//! representations; bandlimited spaces are sums of isotypic components.

use crate::error::{CoorbitError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// One irreducible representation as a table of unitary matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub name: String,
    pub dim: usize,
    /// `mats[x]` is `pi(x)`.
    pub mats: Vec<DMatrix<Complex64>>,
}

impl Irrep {
    pub fn character(&self, x: usize) -> Complex64 {
        self.mats[x].trace()
    }
}

/// A finite group with its irreducible representations.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupSpec {
    pub order: usize,
    /// `table[x][y]` is the index of `x y`.
    pub table: Vec<Vec<usize>>,
    pub irreps: Vec<Irrep>,
    identity: usize,
    inverse: Vec<usize>,
}

const TOL: f64 = 1e-10;

impl FiniteGroupSpec {
    /// Validates the table (identity, inverses, associativity) and the
    /// representations (homomorphism, unitarity, `sum d^2 = |K|`).
    pub fn new(table: Vec<Vec<usize>>, irreps: Vec<Irrep>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(CoorbitError::InvalidGroup("multiplication table must be square with entries in range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| CoorbitError::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| CoorbitError::InvalidGroup(format!("element {x} has no inverse")))?;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(CoorbitError::InvalidGroup(format!("not associative at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        let mut dims = 0;
        for p in &irreps {
            if p.mats.len() != n || p.mats.iter().any(|m| m.nrows() != p.dim || m.ncols() != p.dim) {
                return Err(CoorbitError::InvalidGroup(format!("representation {} has wrong shape", p.name)));
            }
            for x in 0..n {
                let u = &p.mats[x];
                if (u.adjoint() * u - DMatrix::identity(p.dim, p.dim)).norm() > TOL {
                    return Err(CoorbitError::InvalidGroup(format!("representation {} is not unitary at {x}", p.name)));
                }
                for y in 0..n {
                    if (&p.mats[x] * &p.mats[y] - &p.mats[table[x][y]]).norm() > TOL {
                        return Err(CoorbitError::InvalidGroup(format!(
                            "representation {} is not multiplicative at ({x}, {y})",
                            p.name
                        )));
                    }
                }
            }
            dims += p.dim * p.dim;
        }
        if dims != n {
            return Err(CoorbitError::InvalidGroup(format!("sum of squared dimensions is {dims}, group order is {n}")));
        }
        Ok(FiniteGroupSpec { order: n, table, irreps, identity, inverse })
    }

    /// The symmetric group on three letters with its trivial, sign and standard representations.
    pub fn s3() -> Self {
        // Permutations of {0, 1, 2} as images (p(0), p(1), p(2)).
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // (x y)(i) = x(y(i)).
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|x| perms.iter().map(|y| index([x[y[0]], x[y[1]], x[y[2]]])).collect())
            .collect();
        let sign = |p: &[usize; 3]| {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            if inv % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let c = |re: f64| Complex64::new(re, 0.0);
        let trivial = Irrep { name: "trivial".into(), dim: 1, mats: perms.iter().map(|_| DMatrix::from_element(1, 1, c(1.0))).collect() };
        let sgn = Irrep {
            name: "sign".into(),
            dim: 1,
            mats: perms.iter().map(|p| DMatrix::from_element(1, 1, c(sign(p)))).collect(),
        };
        // Standard representation: the permutation matrices restricted to the
        // plane orthogonal to (1, 1, 1), in the orthonormal basis e1, e2 below.
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        let basis = [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]];
        let standard = Irrep {
            name: "standard".into(),
            dim: 2,
            mats: perms
                .iter()
                .map(|p| {
                    DMatrix::from_fn(2, 2, |r, s| {
                        // <e_r, P e_s> with (P v)_{p(i)} = v_i.
                        let mut acc = 0.0;
                        for i in 0..3 {
                            acc += basis[r][p[i]] * basis[s][i];
                        }
                        c(acc)
                    })
                })
                .collect(),
        };
        FiniteGroupSpec::new(table, vec![trivial, sgn, standard]).expect("S3 tables are consistent")
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn irrep_index(&self, name: &str) -> Result<usize> {
        self.irreps
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| CoorbitError::InvalidParameter(format!("unknown representation {name}")))
    }

    fn check_omega(&self, omega: &[usize]) -> Result<()> {
        if omega.is_empty() {
            return Err(CoorbitError::InvalidParameter("empty set of representations".into()));
        }
        if let Some(&bad) = omega.iter().find(|&&i| i >= self.irreps.len()) {
            return Err(CoorbitError::InvalidParameter(format!("unknown representation index {bad}")));
        }
        Ok(())
    }
}

/// `psi(x) = |K|^{-1} sum_{pi in Omega} d(pi) Tr pi(x)`.
pub fn finite_group_kernel(spec: &FiniteGroupSpec, omega: &[usize]) -> Result<Vec<Complex64>> {
    spec.check_omega(omega)?;
    let k = spec.order as f64;
    Ok((0..spec.order)
        .map(|x| omega.iter().map(|&i| spec.irreps[i].character(x) * spec.irreps[i].dim as f64).sum::<Complex64>() / k)
        .collect())
}

/// `(f * g)(x) = sum_y f(y) g(y^{-1} x)` with counting measure.
pub fn finite_convolve(spec: &FiniteGroupSpec, f: &[Complex64], g: &[Complex64]) -> Result<Vec<Complex64>> {
    if f.len() != spec.order || g.len() != spec.order {
        return Err(CoorbitError::InvalidParameter("function length differs from the group order".into()));
    }
    Ok((0..spec.order)
        .map(|x| (0..spec.order).map(|y| f[y] * g[spec.mul(spec.inverse(y), x)]).sum())
        .collect())
}

/// `f-hat(pi) = |K|^{-1} sum_x f(x) pi(x)^*`, the transform for the normalized counting measure.
pub fn finite_fourier(spec: &FiniteGroupSpec, f: &[Complex64]) -> Vec<DMatrix<Complex64>> {
    let k = spec.order as f64;
    spec.irreps
        .iter()
        .map(|p| {
            let mut acc = DMatrix::zeros(p.dim, p.dim);
            for x in 0..spec.order {
                acc += p.mats[x].adjoint() * f[x];
            }
            acc / Complex64::new(k, 0.0)
        })
        .collect()
}

/// Both sides of `|K|^{-1} sum_x |f(x)|^2 = sum_pi d(pi) ||f-hat(pi)||_HS^2`.
pub fn plancherel_sides(spec: &FiniteGroupSpec, f: &[Complex64]) -> (f64, f64) {
    let lhs = f.iter().map(|z| z.norm_sqr()).sum::<f64>() / spec.order as f64;
    let rhs = finite_fourier(spec, f)
        .iter()
        .zip(&spec.irreps)
        .map(|(m, p)| p.dim as f64 * m.norm_squared())
        .sum();
    (lhs, rhs)
}

/// Spanning set and projector of the bandlimited space.
#[derive(Debug, Clone)]
pub struct BandlimitedSpace {
    /// Functions `x -> d(pi) pi(x)_{uv}` for `pi` in the band.
    pub basis: Vec<Vec<Complex64>>,
    /// Matrix of `f -> f * psi`: `projector[(x, y)] = psi(y^{-1} x)`.
    pub projector: DMatrix<Complex64>,
    /// `sum_{pi in Omega} d(pi)^2`.
    pub dimension: usize,
}

impl BandlimitedSpace {
    /// Numerical rank of the projector.
    pub fn rank(&self) -> usize {
        let sv = self.projector.clone().svd(false, false).singular_values;
        sv.iter().filter(|&&s| s > 1e-10).count()
    }
}

pub fn finite_group_bandlimited_space(spec: &FiniteGroupSpec, omega: &[usize]) -> Result<BandlimitedSpace> {
    let psi = finite_group_kernel(spec, omega)?;
    let n = spec.order;
    let projector = DMatrix::from_fn(n, n, |x, y| psi[spec.mul(spec.inverse(y), x)]);
    let mut basis = vec![];
    let mut dimension = 0;
    for &i in omega {
        let p = &spec.irreps[i];
        dimension += p.dim * p.dim;
        for u in 0..p.dim {
            for v in 0..p.dim {
                basis.push((0..n).map(|x| p.mats[x][(u, v)] * p.dim as f64).collect());
            }
        }
    }
    Ok(BandlimitedSpace { basis, projector, dimension })
}

/// `(d / |K|) sum_y conj(chi(y)) f(y^{-1} x)`, the isotypic projector from character orthogonality.
pub fn character_projection(spec: &FiniteGroupSpec, irrep: usize, f: &[Complex64]) -> Vec<Complex64> {
    let p = &spec.irreps[irrep];
    let c = p.dim as f64 / spec.order as f64;
    (0..spec.order)
        .map(|x| (0..spec.order).map(|y| p.character(y).conj() * f[spec.mul(spec.inverse(y), x)]).sum::<Complex64>() * c)
        .collect()
}
