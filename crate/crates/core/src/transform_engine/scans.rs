//! Integrability scans of `F_n` over nested dilation ranges.
//!
//! Translations are integrated over the whole line in closed form after the
//! substitution `b = s tan(theta)` with `s = a + 1/a`, so only the dilation
//! range is truncated. Dilations use Gauss-Legendre in `log a` on each dyadic
//! shell `[2^-m, 2^-(m-1)]` and `[2^(m-1), 2^m]`.

use crate::error::{CoorbitError, Result};
use crate::group_core::quad::gauss_legendre_on;
use crate::group_core::sum::CompensatedSum;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

/// Outcome of a nested-domain scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    Diverged,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converged => "converged",
            Verdict::Diverged => "diverged",
        }
    }
}

/// One line of a scan: the truncated value on `a` in `[2^-m, 2^m]` and its
/// increment relative to the previous line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub m: u32,
    pub value: f64,
    pub increment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub rows: Vec<ScanRow>,
    pub verdict: Verdict,
}

/// Relative increment below which the final doubling counts as converged.
pub const CONVERGENCE_THRESHOLD: f64 = 0.01;

/// `int_R (s^2 + b^2)^(-k/2) db = s^(1-k) J(k)` with `J(k) = int cos^(k-2)`
/// over `(-pi/2, pi/2)`, finite for `k > 1`.
fn cos_power_integral(k: f64) -> f64 {
    // 2 int_0^{pi/2} sin^(k-2) t dt with t = w^2 to soften the endpoint.
    let (w, wt) = gauss_legendre_on(200, 0.0, FRAC_PI_2.sqrt());
    let mut acc = CompensatedSum::new();
    for (x, v) in w.iter().zip(&wt) {
        acc.add((x * x).sin().powf(k - 2.0) * 2.0 * x * v);
    }
    2.0 * acc.value()
}

/// Integral of `g(log a)` over one dyadic shell on each side of `a = 1`.
fn shell<G: Fn(f64) -> f64>(g: &G, m: u32) -> f64 {
    let (lo, hi) = ((m - 1) as f64 * LN_2, m as f64 * LN_2);
    let mut acc = CompensatedSum::new();
    for side in [1.0, -1.0] {
        let (x, w) = gauss_legendre_on(64, lo, hi);
        for (l, wt) in x.iter().zip(&w) {
            acc.add(g(side * l) * wt);
        }
    }
    acc.value()
}

fn run_scan<G: Fn(f64) -> f64>(g: G, doublings: u32, root: f64) -> Result<Scan> {
    if doublings < 2 {
        return Err(CoorbitError::InvalidParameter("a scan needs at least two doublings".into()));
    }
    let mut total = CompensatedSum::new();
    let mut rows = Vec::with_capacity(doublings as usize);
    let mut prev = 0.0;
    for m in 1..=doublings {
        total.add(shell(&g, m));
        let value = total.value().powf(1.0 / root);
        if !value.is_finite() {
            return Err(CoorbitError::NonFinite("scan".into()));
        }
        let increment = if m == 1 { f64::NAN } else { (value - prev) / prev };
        rows.push(ScanRow { m, value, increment });
        prev = value;
    }
    let last = rows[rows.len() - 1].increment;
    let verdict = if last < CONVERGENCE_THRESHOLD { Verdict::Converged } else { Verdict::Diverged };
    Ok(Scan { rows, verdict })
}

/// Truncated `||F_n||_{L^p}` on `a` in `[2^-m, 2^m]` (matrix chart), `m = 1..=doublings`.
pub fn lp_finiteness_scan(n: u32, p: f64, doublings: u32) -> Result<Scan> {
    if n < 2 || !(p >= 1.0) || !p.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("need n >= 2 and finite p >= 1, got n={n}, p={p}")));
    }
    let k = n as f64 * p;
    if k <= 1.0 {
        return Err(CoorbitError::Diverged("translation integral is infinite for n p <= 1".into()));
    }
    // |F_n| = 2^(n-1) / ((n-1) (s^2 + b^2)^(n/2)).
    let c = (2f64.powi(n as i32 - 1) / (n as f64 - 1.0)).powf(p) * cos_power_integral(k);
    // da / a^2 = d(log a) / a.
    run_scan(|l| c * (l.exp() + (-l).exp()).powf(1.0 - k) * (-l).exp(), doublings, p)
}

/// Truncated `int int |F_2| a^eps db da / a^2` (matrix chart) on nested ranges.
pub fn weighted_f2_integral(eps: f64, doublings: u32) -> Result<Scan> {
    if !eps.is_finite() {
        return Err(CoorbitError::InvalidParameter(format!("eps must be finite, got {eps}")));
    }
    // int |F_2| db = 2 pi / s.
    run_scan(|l| 2.0 * PI * (eps * l).exp() / (l.exp() + (-l).exp()) * (-l).exp(), doublings, 1.0)
}

/// `C_r = int int a^r |F_2| db da / a^2 = pi^2 / sin(pi r / 2)` for `0 < r < 2`.
pub fn weighted_f2_constant(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 2.0) {
        return Err(CoorbitError::InvalidParameter(format!("weight exponent must lie in (0, 2), got {r}")));
    }
    Ok(PI * PI / (PI * r / 2.0).sin())
}
