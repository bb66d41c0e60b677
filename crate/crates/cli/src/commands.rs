//! One function per subcommand; each turns a resolved [`Config`] into a CSV table.

use crate::config::Config;
use crate::families::{besov_family, polynomial_family, reproducing_signals, shannon_target};
use coorbit_core::atomic_decomp::{
    atomic_reconstruct, build_lattice, identity_minus_t, lattice_samples, osc_measure, probe_points, ratio_range,
    reconstruction_error, translated_atom, Gram, IndexRanges, OscWindow, Region,
};
use coorbit_core::atomic_decomp::osc_bound;
use coorbit_core::gelfand_sampling::{
    check_tiling, coorbit_tautology_check, cyclic_bandlimited, cyclic_project, cyclic_sample_reconstruct,
    finite_convolve, finite_group_bandlimited_space, finite_group_kernel, plancherel_sides, point_evaluation_bound,
    seeded_coefficients, shannon_reconstruct, CommutativeSpaceSpec, CyclicBand, FiniteGroupSpec,
};
use coorbit_core::group_core::derivative::{DerivativeSide, Generator};
use coorbit_core::group_core::element::MatrixElement;
use coorbit_core::group_core::grid::{GridSpec, HaarGrid, Sheets};
use coorbit_core::io::{fmt_f64, load_finite_group, CsvTable};
use coorbit_core::kernels::{kernel_normalize, voice_wavelet, Kernel, WaveletSpec};
use coorbit_core::transform_engine::{
    bergman_compare, besov_norm_coorbit, besov_norm_lp, derivative_commutation_residual, dp_estimate,
    idempotency_residual, lp_finiteness_scan, reproducing_residual, weighted_f2_integral, BesovSpec, Scan,
    CONVERGENCE_THRESHOLD,
};
use coorbit_core::{Complex64, CoorbitError, Result};
use std::path::Path;
use std::sync::Arc;

/// The experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ReproCheck,
    LpScan,
    WeightedInt,
    Dp,
    Osc,
    Atomic,
    SobolevCheck,
    BesovCompare,
    Shannon,
    Cyclic,
    FiniteGroup,
    BergmanCompare,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::ReproCheck,
        Command::LpScan,
        Command::WeightedInt,
        Command::Dp,
        Command::Osc,
        Command::Atomic,
        Command::SobolevCheck,
        Command::BesovCompare,
        Command::Shannon,
        Command::Cyclic,
        Command::FiniteGroup,
        Command::BergmanCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ReproCheck => "repro-check",
            Command::LpScan => "lp-scan",
            Command::WeightedInt => "weighted-int",
            Command::Dp => "dp",
            Command::Osc => "osc",
            Command::Atomic => "atomic",
            Command::SobolevCheck => "sobolev-check",
            Command::BesovCompare => "besov-compare",
            Command::Shannon => "shannon",
            Command::Cyclic => "cyclic",
            Command::FiniteGroup => "finite-group",
            Command::BergmanCompare => "bergman-compare",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::ReproCheck => "normalization constant and reproducing-formula residuals of a kernel",
            Command::LpScan => "truncated L^p norms of F_n on doubling dilation ranges",
            Command::WeightedInt => "truncated integrals of a^eps |F_2| on doubling dilation ranges",
            Command::Dp => "analytic bound and power-method estimate of the L^p norm of convolution with F_2",
            Command::Osc => "oscillation bound against the measured oscillation of F_2 over windows",
            Command::Atomic => "lattice, frame-operator defect and atomic reconstruction of a translated kernel",
            Command::SobolevCheck => "commutation of left-invariant derivatives with wavelet convolution",
            Command::BesovCompare => "Littlewood-Paley Besov norms against coorbit mixed norms",
            Command::Shannon => "sampling series for a bandlimited function on the line",
            Command::Cyclic => "sampling of bandlimited functions on a cyclic group",
            Command::FiniteGroup => "bandlimited projection and Plancherel identity on a finite group",
            Command::BergmanCompare => "coorbit norms of polynomials against weighted Bergman norms",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.iter().copied().find(|c| c.name() == s)
    }

    /// Defaults that do not depend on other settings.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::ReproCheck => &[("kernel", "f2"), ("tol", "1e-2")],
            Command::LpScan => &[("n", "2"), ("p", "2"), ("doublings", "20")],
            Command::WeightedInt => &[("eps", "1"), ("doublings", "20")],
            Command::Dp => &[
                ("p", "1.5,2,3"),
                ("seed", "1"),
                ("table", "summary"),
                ("grid-amin", "2^-6"),
                ("grid-amax", "2^6"),
                ("na", "49"),
                ("bmax", "64"),
                ("nb", "193"),
            ],
            Command::Osc => &[
                ("delta", "1.05"),
                ("gamma", "0.05"),
                ("samples", "9"),
                ("grid-amin", "2^-6"),
                ("grid-amax", "2^6"),
                ("na", "33"),
                ("bmax", "64"),
                ("nb", "65"),
            ],
            Command::Atomic => &[
                ("a0", "2^0.25"),
                ("b0", "0.25"),
                ("region", "1/4:4:6"),
                ("eval", "1/2:2:3"),
                ("target", "1.1,0.3"),
                ("tol", "1e-3"),
                ("max-iter", "400"),
                ("seed", "1"),
                ("probes", "10"),
                ("table", "summary"),
                ("jrange", "all"),
                ("krange", "all"),
                ("grid-amin", "1/8"),
                ("grid-amax", "8"),
                ("na", "97"),
                ("bmax", "12"),
                ("nb", "193"),
            ],
            Command::SobolevCheck => &[
                ("width", "1"),
                ("grid-amin", "1/4"),
                ("grid-amax", "4"),
                ("na", "97"),
                ("bmax", "8"),
                ("nb", "81"),
            ],
            Command::BesovCompare => &[
                ("p", "2"),
                ("q", "2"),
                ("s", "0.5"),
                ("grid-amin", "1/16"),
                ("grid-amax", "16"),
                ("na", "65"),
                ("bmax", "96"),
                ("nb", "385"),
            ],
            Command::Shannon => &[("rate", "1"), ("N", "5000"), ("table", "summary")],
            Command::Cyclic => &[("N", "12"), ("omega", "0:4"), ("seed", "1"), ("table", "summary"), ("tile", "false")],
            Command::FiniteGroup => &[("seed", "1")],
            Command::BergmanCompare => &[
                ("n", "2"),
                ("p", "2"),
                ("grid-amin", "2^-6"),
                ("grid-amax", "2^6"),
                ("na", "129"),
                ("bmax", "64"),
                ("nb", "513"),
            ],
        }
    }

    /// Fills settings whose defaults depend on other settings.
    pub fn derive(self, cfg: &mut Config) -> Result<()> {
        match self {
            Command::ReproCheck => {
                let grid: [(&str, &str); 5] = if cfg.raw("kernel")? == "wavelet" {
                    [("grid-amin", "1/8"), ("grid-amax", "8"), ("na", "49"), ("bmax", "48"), ("nb", "385")]
                } else {
                    [("grid-amin", "2^-6"), ("grid-amax", "2^6"), ("na", "257"), ("bmax", "64"), ("nb", "513")]
                };
                for (k, v) in grid {
                    if !cfg.has(k) {
                        cfg.set(k, v);
                    }
                }
            }
            Command::Cyclic => {
                if !cfg.has("m") {
                    let m = cfg.index_set("omega")?.len();
                    cfg.set("m", m.to_string());
                }
            }
            Command::FiniteGroup => {
                if !cfg.has("omega") {
                    let count = if cfg.has("irreps") { cfg.raw("irreps")?.split(',').count() } else { 3 };
                    cfg.set("omega", format!("0:{count}"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// How a run ended, beyond its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The table was written but an iteration stopped before its tolerance.
    NotConverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: CsvTable,
    pub status: Status,
}

impl From<CsvTable> for Outcome {
    fn from(table: CsvTable) -> Self {
        Outcome { table, status: Status::Success }
    }
}

pub fn execute(cmd: Command, cfg: &Config) -> Result<Outcome> {
    match cmd {
        Command::ReproCheck => repro_check(cfg).map(Into::into),
        Command::LpScan => {
            let n = cfg.usize("n")?;
            let n = u32::try_from(n).map_err(|_| CoorbitError::InvalidParameter("--n is too large".into()))?;
            Ok(scan_table(&lp_finiteness_scan(n, cfg.f64("p")?, doublings(cfg)?)?).into())
        }
        Command::WeightedInt => Ok(scan_table(&weighted_f2_integral(cfg.f64("eps")?, doublings(cfg)?)?).into()),
        Command::Dp => dp(cfg).map(Into::into),
        Command::Osc => osc(cfg).map(Into::into),
        Command::Atomic => atomic(cfg),
        Command::SobolevCheck => sobolev(cfg).map(Into::into),
        Command::BesovCompare => besov(cfg).map(Into::into),
        Command::Shannon => shannon(cfg).map(Into::into),
        Command::Cyclic => cyclic(cfg).map(Into::into),
        Command::FiniteGroup => finite_group(cfg).map(Into::into),
        Command::BergmanCompare => bergman(cfg).map(Into::into),
    }
}

fn grid_spec(cfg: &Config) -> Result<(f64, f64, usize, f64, usize)> {
    Ok((cfg.positive("grid-amin")?, cfg.positive("grid-amax")?, cfg.usize("na")?, cfg.positive("bmax")?, cfg.usize("nb")?))
}

fn matrix_grid(cfg: &Config) -> Result<Arc<HaarGrid>> {
    let (a0, a1, na, b, nb) = grid_spec(cfg)?;
    HaarGrid::new(GridSpec::matrix(a0, a1, na, b, nb))
}

fn affine_grid(cfg: &Config, sheets: Sheets) -> Result<Arc<HaarGrid>> {
    let (a0, a1, na, b, nb) = grid_spec(cfg)?;
    HaarGrid::new(GridSpec::affine(sheets, a0, a1, na, b, nb))
}

fn doublings(cfg: &Config) -> Result<u32> {
    u32::try_from(cfg.usize("doublings")?).map_err(|_| CoorbitError::InvalidParameter("--doublings is too large".into()))
}

fn row<const N: usize>(t: &mut CsvTable, cells: [String; N]) {
    t.push(cells);
}

fn q(t: &mut CsvTable, name: &str, v: impl ToString) {
    row(t, [name.to_string(), v.to_string()]);
}

fn qf(t: &mut CsvTable, name: &str, v: f64) {
    q(t, name, fmt_f64(v));
}

fn quantities() -> CsvTable {
    CsvTable::new(&["quantity", "value"])
}

fn repro_check(cfg: &Config) -> Result<CsvTable> {
    let kernel = cfg.raw("kernel")?;
    let tol = cfg.positive("tol")?;
    let mut t = quantities();
    q(&mut t, "kernel", kernel);
    let mut worst;
    if kernel == "wavelet" {
        let g = affine_grid(cfg, Sheets::Both)?;
        let spec = WaveletSpec::standard();
        let (kappa, k) = kernel_normalize(&Kernel::wavelet(spec), &g)?;
        let r = idempotency_residual(&k, &g)?;
        qf(&mut t, "kappa", kappa);
        qf(&mut t, "idempotency_residual", r);
        worst = r;
        for (i, v) in reproducing_signals().iter().enumerate() {
            let w = voice_wavelet(&spec, v, &g)?;
            let r = reproducing_residual(&w, &k)?;
            qf(&mut t, &format!("signal_{}_residual", i + 1), r);
            worst = worst.max(r);
        }
    } else {
        let n: u32 = kernel
            .strip_prefix('f')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| CoorbitError::InvalidParameter(format!("--kernel: expected f<n> or wavelet, got {kernel}")))?;
        let g = matrix_grid(cfg)?;
        let (kappa, k) = kernel_normalize(&Kernel::discrete_series(n)?, &g)?;
        qf(&mut t, "kappa", kappa);
        if n == 2 {
            qf(&mut t, "kappa_exact", std::f64::consts::PI);
        }
        worst = idempotency_residual(&k, &g)?;
        qf(&mut t, "idempotency_residual", worst);
    }
    qf(&mut t, "tolerance", tol);
    q(&mut t, "within_tolerance", worst <= tol);
    Ok(t)
}

fn scan_table(s: &Scan) -> CsvTable {
    let mut t = CsvTable::new(&["m", "value", "increment", "verdict"]);
    for r in &s.rows {
        let (inc, verdict) = if r.increment.is_nan() {
            (String::new(), String::new())
        } else {
            let v = if r.increment < CONVERGENCE_THRESHOLD { "converged" } else { "diverged" };
            (fmt_f64(r.increment), v.to_string())
        };
        row(&mut t, [r.m.to_string(), fmt_f64(r.value), inc, verdict]);
    }
    t
}

fn dp(cfg: &Config) -> Result<CsvTable> {
    let g = matrix_grid(cfg)?;
    let (kappa, k) = kernel_normalize(&Kernel::discrete_series(2)?, &g)?;
    let seed = cfg.u64("seed")?;
    let detail = match cfg.raw("table")? {
        "summary" => false,
        "iterations" => true,
        o => return Err(CoorbitError::InvalidParameter(format!("--table: expected summary or iterations, got {o}"))),
    };
    let mut t = if detail {
        CsvTable::new(&["p", "iter", "value"])
    } else {
        CsvTable::new(&["p", "kappa", "bound", "empirical"])
    };
    for p in cfg.f64_list("p")? {
        let e = dp_estimate(p, &k, &g, seed)?;
        if detail {
            for (i, v) in e.history.iter().enumerate() {
                row(&mut t, [fmt_f64(p), (i + 1).to_string(), fmt_f64(*v)]);
            }
        } else {
            row(&mut t, [fmt_f64(p), fmt_f64(kappa), fmt_f64(e.bound), fmt_f64(e.empirical)]);
        }
    }
    Ok(t)
}

fn osc(cfg: &Config) -> Result<CsvTable> {
    let g = matrix_grid(cfg)?;
    let n = cfg.usize("samples")?;
    let mut t = CsvTable::new(&["delta", "gamma", "eps_bound", "eps_measured", "ratio_min", "ratio_max"]);
    for d in cfg.f64_list("delta")? {
        for c in cfg.f64_list("gamma")? {
            let w = OscWindow::new(d, c)?;
            let (lo, hi) = ratio_range(&w, &g, n)?;
            row(&mut t, [fmt_f64(d), fmt_f64(c), fmt_f64(osc_bound(&w)), fmt_f64(osc_measure(&w, &g, n)?), fmt_f64(lo), fmt_f64(hi)]);
        }
    }
    Ok(t)
}

fn region(cfg: &Config, key: &str) -> Result<Region> {
    let (a, b, c) = cfg.triple(key)?;
    Region::new(a, b, c)
}

fn atomic(cfg: &Config) -> Result<Outcome> {
    let grid = matrix_grid(cfg)?;
    let ranges = IndexRanges { j: cfg.index_range("jrange")?, k: cfg.index_range("krange")? };
    let lat = build_lattice(cfg.positive("a0")?, cfg.positive("b0")?, region(cfg, "region")?, ranges, &grid)?;
    let table = cfg.raw("table")?;
    if table == "lattice" {
        let mut t = CsvTable::new(&["j", "k", "A", "B", "c_i"]);
        for p in &lat.points {
            row(&mut t, [p.j.to_string(), p.k.to_string(), fmt_f64(p.x.a), fmt_f64(p.x.b), fmt_f64(lat.c)]);
        }
        return Ok(t.into());
    }
    let gram = Gram::new(&lat);
    let eval = region(cfg, "eval")?;
    let probes = probe_points(&eval, cfg.usize("probes")?, cfg.u64("seed")?);
    let defect = identity_minus_t(&lat, &gram, &probes);
    let (ta, tb) = cfg.pair("target")?;
    let target = MatrixElement::new(ta, tb)?;
    let samples = lattice_samples(&lat, |x| translated_atom(target, x));
    let rec = atomic_reconstruct(&samples, &lat, &gram, cfg.positive("tol")?, cfg.usize("max-iter")?)?;
    let status = if rec.converged { Status::Success } else { Status::NotConverged };
    let t = match table {
        "iterations" => {
            let mut t = CsvTable::new(&["iter", "residual"]);
            for (i, r) in rec.history.iter().enumerate() {
                row(&mut t, [i.to_string(), fmt_f64(*r)]);
            }
            t
        }
        "summary" => {
            let eval_grid = HaarGrid::new(GridSpec::matrix(eval.a_min, eval.a_max, 65, eval.b_max, 129))?;
            let err = reconstruction_error(&rec, &lat, target, &eval_grid)?;
            let mut t = quantities();
            qf(&mut t, "a0", lat.a0);
            qf(&mut t, "b0", lat.b0);
            q(&mut t, "atoms", lat.len());
            qf(&mut t, "c", lat.c);
            qf(&mut t, "c_closed_form", lat.c_closed_form);
            qf(&mut t, "window_delta", lat.window.delta);
            qf(&mut t, "window_gamma", lat.window.gamma);
            qf(&mut t, "eps_bound", lat.eps);
            match lat.constants {
                Some((c1, c2)) => {
                    qf(&mut t, "c1", c1);
                    qf(&mut t, "c2", c2);
                }
                None => {
                    q(&mut t, "c1", "none");
                    q(&mut t, "c2", "none");
                }
            }
            q(&mut t, "separation_violations", lat.separation_violations().len());
            q(&mut t, "uncovered_nodes", lat.uncovered_nodes(&grid).len());
            qf(&mut t, "i_minus_t_max", defect.iter().copied().fold(0.0, f64::max));
            qf(&mut t, "i_minus_t_mean", defect.iter().sum::<f64>() / defect.len().max(1) as f64);
            q(&mut t, "iterations", rec.iterations());
            q(&mut t, "converged", rec.converged);
            qf(&mut t, "final_residual", *rec.history.last().unwrap_or(&0.0));
            qf(&mut t, "max_ratio", rec.max_ratio());
            qf(&mut t, "tail_rate", rec.tail_rate(10));
            qf(&mut t, "relative_error", err);
            t
        }
        o => return Err(CoorbitError::InvalidParameter(format!("--table: expected summary, lattice or iterations, got {o}"))),
    };
    Ok(Outcome { table: t, status })
}

/// Commutation residuals on the configured grid and on its refinement.
pub fn sobolev_rows(cfg: &Config) -> Result<Vec<(Generator, f64, f64, f64, usize)>> {
    let w = cfg.positive("width")?;
    let (a0, a1, na, b, nb) = grid_spec(cfg)?;
    let base = GridSpec::affine(Sheets::Positive, a0, a1, na, b, nb);
    let kernel = Kernel::wavelet(WaveletSpec::standard());
    let mut out = Vec::new();
    for x in [Generator::X1, Generator::X2] {
        let mut res = [0.0; 2];
        let mut info = (0.0, 0);
        for (i, spec) in [base, base.refined()].into_iter().enumerate() {
            let g = HaarGrid::new(spec)?;
            let f = g.sample_chart(|a, b| {
                let l = a.ln();
                Complex64::new((-(l * l) / w - b * b / (4.0 * w)).exp(), 0.0)
            });
            let r = derivative_commutation_residual(&f, &kernel, x, DerivativeSide::LeftInvariant, None)?;
            res[i] = r.residual;
            if i == 0 {
                info = (r.step, r.nodes_used);
            }
        }
        out.push((x, res[0], res[1], info.0, info.1));
    }
    Ok(out)
}

fn sobolev(cfg: &Config) -> Result<CsvTable> {
    let mut t = CsvTable::new(&["generator", "residual", "residual_refined", "ratio", "step", "nodes"]);
    for (x, r0, r1, h, n) in sobolev_rows(cfg)? {
        let name = match x {
            Generator::X1 => "X1",
            Generator::X2 => "X2",
        };
        row(&mut t, [name.into(), fmt_f64(r0), fmt_f64(r1), fmt_f64(r1 / r0), fmt_f64(h), n.to_string()]);
    }
    Ok(t)
}

fn besov(cfg: &Config) -> Result<CsvTable> {
    let g = affine_grid(cfg, Sheets::Both)?;
    let spec = BesovSpec::new(cfg.f64("s")?, cfg.f64("p")?, cfg.f64("q")?, -4, 6, 256.0)?;
    let u = WaveletSpec::standard();
    let mut t = CsvTable::new(&["function", "center", "besov_lp", "besov_coorbit", "ratio"]);
    for (i, v) in besov_family().iter().enumerate() {
        let lp = besov_norm_lp(v, &spec)?;
        let co = besov_norm_coorbit(v, &u, &spec, &g)?;
        row(&mut t, [(i + 1).to_string(), fmt_f64(v.center), fmt_f64(lp), fmt_f64(co), fmt_f64(lp / co)]);
    }
    Ok(t)
}

fn shannon(cfg: &Config) -> Result<CsvTable> {
    let r = cfg.positive("rate")?;
    let n = cfg.usize("N")? as i64;
    let samples: Vec<f64> = (-n..=n).map(|k| shannon_target(r, k as f64 / r)).collect();
    let xs: Vec<f64> = (0..=1000).map(|i| (-5.0 + 0.01 * i as f64) / r).collect();
    let out = shannon_reconstruct(&samples, r, &xs)?;
    let errs: Vec<f64> = xs.iter().zip(&out.values).map(|(x, v)| (v - shannon_target(r, *x)).abs()).collect();
    match cfg.raw("table")? {
        "points" => {
            let mut t = CsvTable::new(&["point", "truth", "estimate", "abs_err"]);
            for ((x, v), e) in xs.iter().zip(&out.values).zip(&errs) {
                row(&mut t, [fmt_f64(*x), fmt_f64(shannon_target(r, *x)), fmt_f64(*v), fmt_f64(*e)]);
            }
            Ok(t)
        }
        "summary" => {
            let at_samples: Vec<f64> = (-5..=5)
                .map(|k| {
                    let x = k as f64 / r;
                    let v = shannon_reconstruct(&samples, r, &[x]).map(|o| o.values[0]);
                    v.map(|v| (v - samples[(k + n) as usize]).abs())
                })
                .collect::<Result<_>>()?;
            let mut t = quantities();
            qf(&mut t, "rate", r);
            q(&mut t, "samples", samples.len());
            q(&mut t, "eval_points", xs.len());
            qf(&mut t, "max_abs_err", errs.iter().copied().fold(0.0, f64::max));
            qf(&mut t, "max_err_at_samples", at_samples.into_iter().fold(0.0, f64::max));
            qf(&mut t, "edge_terms", out.edge_terms);
            Ok(t)
        }
        o => Err(CoorbitError::InvalidParameter(format!("--table: expected summary or points, got {o}"))),
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn cyclic(cfg: &Config) -> Result<CsvTable> {
    let band = CyclicBand::new(cfg.usize("N")?, cfg.index_set("omega")?)?;
    let m = cfg.usize("m")?;
    if cfg.flag("tile")? {
        check_tiling(&band, m)?;
    }
    let coeffs = seeded_coefficients(band.omega.len(), cfg.u64("seed")?);
    let f = cyclic_bandlimited(&band, &coeffs);
    let rec = cyclic_sample_reconstruct(&f, &band, m)?;
    match cfg.raw("table")? {
        "points" => {
            let mut t = CsvTable::new(&["point", "truth_re", "truth_im", "estimate_re", "estimate_im", "abs_err"]);
            for (i, (a, b)) in f.iter().zip(&rec.estimate).enumerate() {
                row(&mut t, [i.to_string(), fmt_f64(a.re), fmt_f64(a.im), fmt_f64(b.re), fmt_f64(b.im), fmt_f64((a - b).norm())]);
            }
            Ok(t)
        }
        "summary" => {
            let spec = CommutativeSpaceSpec::Cyclic(band.clone());
            let taut = coorbit_tautology_check(&f, &spec)?;
            let (sup, bound) = point_evaluation_bound(&f, &spec);
            let mut t = quantities();
            q(&mut t, "N", band.n);
            q(&mut t, "M", m);
            q(&mut t, "L", band.n / m);
            qf(&mut t, "band_measure", band.measure());
            q(&mut t, "tiles", rec.tiles);
            q(&mut t, "sample_points", rec.sample_points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
            qf(&mut t, "residual", rec.residual);
            qf(&mut t, "projection_residual", max_diff(&cyclic_project(&f, &band)?, &f));
            qf(&mut t, "tautology_difference", taut.max_difference);
            qf(&mut t, "norm_f", taut.norm_f);
            qf(&mut t, "norm_voice", taut.norm_voice);
            qf(&mut t, "sup_f", sup);
            qf(&mut t, "point_bound", bound);
            Ok(t)
        }
        o => Err(CoorbitError::InvalidParameter(format!("--table: expected summary or points, got {o}"))),
    }
}

fn load_group(cfg: &Config) -> Result<FiniteGroupSpec> {
    match (cfg.has("group-table"), cfg.has("irreps")) {
        (false, false) => Ok(FiniteGroupSpec::s3()),
        (true, true) => {
            let irreps: Vec<&str> = cfg.raw("irreps")?.split(',').map(str::trim).collect();
            let paths: Vec<&Path> = irreps.iter().map(Path::new).collect();
            load_finite_group(Path::new(cfg.raw("group-table")?), &paths)
        }
        _ => Err(CoorbitError::InvalidParameter("--group-table and --irreps go together".into())),
    }
}

fn finite_group(cfg: &Config) -> Result<CsvTable> {
    let group = load_group(cfg)?;
    let omega = cfg.index_set("omega")?;
    let space = finite_group_bandlimited_space(&group, &omega)?;
    let n = group.order;
    let (mut id_dev, mut idem) = (0.0f64, 0.0f64);
    let p2 = &space.projector * &space.projector;
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            id_dev = id_dev.max((space.projector[(i, j)] - delta).norm());
            idem = idem.max((p2[(i, j)] - space.projector[(i, j)]).norm());
        }
    }
    let f = seeded_coefficients(n, cfg.u64("seed")?);
    let (lhs, rhs) = plancherel_sides(&group, &f);
    let psi = finite_group_kernel(&group, &omega)?;
    let pf = finite_convolve(&group, &f, &psi)?;
    let spec = CommutativeSpaceSpec::FiniteGroup { group: group.clone(), omega: omega.clone() };
    let taut = coorbit_tautology_check(&f, &spec)?;
    let (sup, bound) = point_evaluation_bound(&pf, &spec);
    let mut t = quantities();
    q(&mut t, "order", n);
    q(&mut t, "band", omega.iter().map(|i| group.irreps[*i].name.clone()).collect::<Vec<_>>().join(" "));
    q(&mut t, "band_dimension", space.dimension);
    q(&mut t, "projector_rank", space.rank());
    qf(&mut t, "identity_deviation", id_dev);
    qf(&mut t, "idempotency_deviation", idem);
    qf(&mut t, "plancherel_lhs", lhs);
    qf(&mut t, "plancherel_rhs", rhs);
    qf(&mut t, "plancherel_difference", (lhs - rhs).abs());
    qf(&mut t, "tautology_difference", taut.max_difference);
    qf(&mut t, "sup_pf", sup);
    qf(&mut t, "point_bound", bound);
    Ok(t)
}

fn bergman(cfg: &Config) -> Result<CsvTable> {
    let g = matrix_grid(cfg)?;
    let n = u32::try_from(cfg.usize("n")?).map_err(|_| CoorbitError::InvalidParameter("--n is too large".into()))?;
    let p = cfg.f64("p")?;
    let mut t = CsvTable::new(&["poly", "coorbit", "bergman", "ratio"]);
    for (name, phi) in polynomial_family() {
        let c = bergman_compare(&phi, n, p, &g)?;
        row(&mut t, [name.to_string(), fmt_f64(c.coorbit), fmt_f64(c.bergman), fmt_f64(c.ratio)]);
    }
    Ok(t)
}
