//! Bandlimited spaces on commutative spaces: projection kernels, the sampling
//! series on the line and exact sampling on cyclic and finite groups.

pub mod cyclic;
pub mod finite;
pub mod shannon;

pub use cyclic::{
    check_tiling, cyclic_bandlimited, cyclic_convolve, cyclic_kernel, cyclic_project, cyclic_sample_reconstruct,
    CyclicBand, CyclicRecovery,
};
pub use finite::{
    character_projection, finite_convolve, finite_fourier, finite_group_bandlimited_space, finite_group_kernel,
    plancherel_sides, BandlimitedSpace, FiniteGroupSpec, Irrep,
};
pub use shannon::{project_real_line, shannon_reconstruct, sinc, sinc_kernel, ShannonResult};

use crate::error::{CoorbitError, Result};
use num_complex::Complex64;

/// The spaces on which bandlimited functions are sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum CommutativeSpaceSpec {
    /// Periodic samples with spacing `dx`, band `|nu| <= r/2` in cycles per unit.
    RealLine { r: f64, dx: f64 },
    Cyclic(CyclicBand),
    FiniteGroup { group: FiniteGroupSpec, omega: Vec<usize> },
}

impl CommutativeSpaceSpec {
    /// Dual measure of the band; `|f(x)| <= sqrt(mu) ||f||_2` for bandlimited `f`.
    pub fn band_measure(&self) -> f64 {
        match self {
            CommutativeSpaceSpec::RealLine { r, .. } => *r,
            CommutativeSpaceSpec::Cyclic(b) => b.measure(),
            CommutativeSpaceSpec::FiniteGroup { group, omega } => {
                omega.iter().map(|&i| (group.irreps[i].dim * group.irreps[i].dim) as f64).sum::<f64>() / group.order as f64
            }
        }
    }

    /// `||f||_2`: counting measure on discrete groups, `dx`-weighted on the line.
    pub fn l2_norm(&self, f: &[Complex64]) -> f64 {
        let s: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        match self {
            CommutativeSpaceSpec::RealLine { dx, .. } => (s * dx).sqrt(),
            _ => s.sqrt(),
        }
    }
}

/// Reproducible complex coefficients, uniform in `[-1, 1]^2`.
pub fn seeded_coefficients(count: usize, seed: u64) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// `f * psi`: exact on the discrete kinds, by the FFT on the line.
pub fn project_bandlimited(f: &[Complex64], spec: &CommutativeSpaceSpec) -> Result<Vec<Complex64>> {
    match spec {
        CommutativeSpaceSpec::RealLine { r, dx } => project_real_line(f, *dx, *r),
        CommutativeSpaceSpec::Cyclic(b) => cyclic_project(f, b),
        CommutativeSpaceSpec::FiniteGroup { group, omega } => finite_convolve(group, f, &finite_group_kernel(group, omega)?),
    }
}

/// `max_x |f(x)|` against `sqrt(mu(Omega)) ||f||_2`.
pub fn point_evaluation_bound(f: &[Complex64], spec: &CommutativeSpaceSpec) -> (f64, f64) {
    let sup = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (sup, spec.band_measure().sqrt() * spec.l2_norm(f))
}

/// Voice transform with analyzing vector `psi` against the convolution `f * psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TautologyReport {
    /// `max_x |<f, l_x psi> - (f * psi)(x)|`.
    pub max_difference: f64,
    pub norm_f: f64,
    pub norm_voice: f64,
    pub norm_projection: f64,
}

/// Computes `V_psi f(x) = <f, l_x psi>` directly from the inner product and
/// compares it with `f * psi`; on the band the coorbit norm is the `L^2` norm.
pub fn coorbit_tautology_check(f: &[Complex64], spec: &CommutativeSpaceSpec) -> Result<TautologyReport> {
    let (voice, proj) = match spec {
        CommutativeSpaceSpec::Cyclic(b) => {
            let psi = cyclic_kernel(b);
            let n = b.n;
            if f.len() != n {
                return Err(CoorbitError::InvalidParameter("signal length differs from N".into()));
            }
            // (l_x psi)(y) = psi(y - x).
            let voice: Vec<Complex64> = (0..n).map(|x| (0..n).map(|y| f[y] * psi[(y + n - x) % n].conj()).sum()).collect();
            (voice, cyclic_project(f, b)?)
        }
        CommutativeSpaceSpec::FiniteGroup { group, omega } => {
            let psi = finite_group_kernel(group, omega)?;
            if f.len() != group.order {
                return Err(CoorbitError::InvalidParameter("signal length differs from the group order".into()));
            }
            // (l_x psi)(y) = psi(x^{-1} y).
            let voice: Vec<Complex64> = (0..group.order)
                .map(|x| (0..group.order).map(|y| f[y] * psi[group.mul(group.inverse(x), y)].conj()).sum())
                .collect();
            (voice, finite_convolve(group, f, &psi)?)
        }
        CommutativeSpaceSpec::RealLine { .. } => {
            return Err(CoorbitError::InvalidParameter("the direct check is implemented for discrete groups".into()))
        }
    };
    let max_difference = voice.iter().zip(&proj).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(TautologyReport {
        max_difference,
        norm_f: spec.l2_norm(f),
        norm_voice: spec.l2_norm(&voice),
        norm_projection: spec.l2_norm(&proj),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tautology_on_cyclic_band() {
        let b = CyclicBand::new(12, vec![0, 1, 2, 3]).unwrap();
        let coeffs = [Complex64::new(1.0, 0.5), Complex64::new(-0.2, 0.1), Complex64::new(0.0, 1.0), Complex64::new(0.3, 0.0)];
        let f = cyclic_bandlimited(&b, &coeffs);
        let spec = CommutativeSpaceSpec::Cyclic(b);
        let r = coorbit_tautology_check(&f, &spec).unwrap();
        assert!(r.max_difference < 1e-13);
        assert!((r.norm_voice - r.norm_f).abs() < 1e-12);
        let (sup, bound) = point_evaluation_bound(&f, &spec);
        assert!(sup <= bound);
    }

    #[test]
    fn zero_signal() {
        let spec = CommutativeSpaceSpec::FiniteGroup { group: FiniteGroupSpec::s3(), omega: vec![2] };
        let r = coorbit_tautology_check(&[Complex64::new(0.0, 0.0); 6], &spec).unwrap();
        assert_eq!((r.norm_f, r.norm_voice, r.max_difference), (0.0, 0.0, 0.0));
    }
}
