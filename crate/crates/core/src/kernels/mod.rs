//! Reproducing kernels on the affine group and their normalization.

pub mod discrete_series;
pub mod wavelet;

pub use discrete_series::{
    bergman_norm, discrete_series_action, disk_rule, eval_poly, f2_at, f_n, f_n_at, voice_discrete_series,
    voice_discrete_series_at,
};
pub use wavelet::{
    voice_wavelet, voice_wavelet_at, voice_wavelet_with, wavelet_kernel_at, Analyzer, AnalyticSpectrum,
    FrequencyTable, Spectrum, TimeSignal, TranslatedSpectrum, WaveletSpec,
};

use crate::error::{CoorbitError, Result};
use crate::group_core::element::AffineElement;
use crate::group_core::grid::{Chart, GridFunction, HaarGrid};
use crate::group_core::sum::ComplexSum;
use num_complex::Complex64;
use std::sync::Arc;

/// Which reproducing kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// `F_n`, evaluated in the matrix chart.
    DiscreteSeries { n: u32 },
    /// `V_w u` for the wavelet `u` and analyzing vector `w`, in the affine chart.
    Wavelet { spec: WaveletSpec, analyzer: Analyzer },
}

/// A kernel divided by a normalization constant `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub kind: KernelKind,
    pub kappa: f64,
}

impl Kernel {
    pub fn discrete_series(n: u32) -> Result<Kernel> {
        if n < 2 {
            return Err(CoorbitError::InvalidParameter(format!("discrete-series parameter n must be >= 2, got {n}")));
        }
        Ok(Kernel { kind: KernelKind::DiscreteSeries { n }, kappa: 1.0 })
    }

    pub fn wavelet(spec: WaveletSpec) -> Kernel {
        Kernel { kind: KernelKind::Wavelet { spec, analyzer: Analyzer::Mother }, kappa: 1.0 }
    }

    /// The same kernel with the analyzing vector replaced by `analyzer`, keeping `kappa`.
    pub fn with_analyzer(&self, analyzer: Analyzer) -> Result<Kernel> {
        match self.kind {
            KernelKind::Wavelet { spec, .. } => Ok(Kernel { kind: KernelKind::Wavelet { spec, analyzer }, kappa: self.kappa }),
            _ => Err(CoorbitError::InvalidParameter("analyzing vectors apply to wavelet kernels only".into())),
        }
    }

    /// Natural chart of the kernel.
    pub fn chart(&self) -> Chart {
        match self.kind {
            KernelKind::DiscreteSeries { .. } => Chart::Matrix,
            KernelKind::Wavelet { .. } => Chart::Affine,
        }
    }

    /// Value at an affine element; zero on the negative sheet for discrete series.
    pub fn eval(&self, g: AffineElement) -> Complex64 {
        match self.kind {
            KernelKind::DiscreteSeries { n } => {
                if g.a <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let a = g.a.sqrt();
                f_n_at(n, a, g.b / a) / self.kappa
            }
            KernelKind::Wavelet { spec, analyzer } => wavelet_kernel_at(&spec, analyzer, g.a, g.b) / self.kappa,
        }
    }

    /// Fills `out[j] = K(x, t0 + j dt)` in chart coordinates of `chart`.
    pub fn fill_row(&self, chart: Chart, x: f64, t0: f64, dt: f64, out: &mut [Complex64]) {
        let inv = 1.0 / self.kappa;
        match (self.kind, chart) {
            (KernelKind::DiscreteSeries { n }, Chart::Matrix) => {
                if n == 2 {
                    for (j, o) in out.iter_mut().enumerate() {
                        *o = f2_at(x, t0 + dt * j as f64) * inv;
                    }
                } else {
                    for (j, o) in out.iter_mut().enumerate() {
                        *o = f_n_at(n, x, t0 + dt * j as f64) * inv;
                    }
                }
            }
            (KernelKind::Wavelet { spec, analyzer }, Chart::Affine) => {
                wavelet::wavelet_kernel_row(&spec, analyzer, x, t0, dt, out);
                out.iter_mut().for_each(|o| *o *= inv);
            }
            (_, chart) => {
                for (j, o) in out.iter_mut().enumerate() {
                    let y = t0 + dt * j as f64;
                    let g = match chart {
                        Chart::Affine => AffineElement { a: x, b: y },
                        Chart::Matrix => crate::group_core::element::MatrixElement { a: x, b: y }.to_affine(),
                    };
                    *o = self.eval(g);
                }
            }
        }
    }

    /// Range of `|A|` (affine chart) outside which the kernel vanishes.
    pub fn dilation_support(&self) -> Option<(f64, f64)> {
        match self.kind {
            KernelKind::DiscreteSeries { .. } => None,
            KernelKind::Wavelet { spec, .. } => Some(spec.dilation_support()),
        }
    }

    /// Samples the kernel on a grid.
    pub fn sample(&self, grid: &Arc<HaarGrid>) -> GridFunction {
        grid.sample(|g| self.eval(g))
    }
}

/// Normalization constant `kappa = (K * K)(e) / K(e)` by quadrature on `grid`,
/// and the normalized kernel `K / kappa`.
///
/// `(K * K)(e) = int K(y) K(y^{-1}) dy`.
pub fn kernel_normalize(kernel: &Kernel, grid: &Arc<HaarGrid>) -> Result<(f64, Kernel)> {
    let raw = Kernel { kappa: 1.0, ..*kernel };
    let k_e = raw.eval(AffineElement::IDENTITY);
    let mut acc = ComplexSum::new();
    for k in 0..grid.len() {
        let y = grid.affine_node(k);
        acc.add(raw.eval(y) * raw.eval(y.inverse()) * grid.weight(k));
    }
    let kk = acc.value();
    let kappa = kk / k_e;
    if !(kappa.re > 0.0) || !kappa.re.is_finite() || kappa.im.abs() > 1e-6 * kappa.re {
        return Err(CoorbitError::InvalidParameter(format!("normalization constant is not a positive real: {kappa}")));
    }
    Ok((kappa.re, Kernel { kappa: kappa.re, ..raw }))
}
