//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria in `KNOWN_FAILURES` are reported but do not fail the process;
//! any other failure, or a panic, exits non-zero.

use coorbit_cli::commands::{execute, sobolev_rows, Command, Outcome, Status};
use coorbit_cli::config::Config;
use coorbit_core::io::CsvTable;
use std::process::Command as Process;
use std::time::Instant;

const KNOWN_FAILURES: &[&str] = &["AC-6", "AC-7"];

fn run(cmd: Command, overrides: &[(&str, &str)]) -> Outcome {
    let mut cfg = Config::with_defaults(cmd.defaults());
    for (k, v) in overrides {
        cfg.set(k, *v);
    }
    cmd.derive(&mut cfg).expect("derive");
    execute(cmd, &cfg).unwrap_or_else(|e| panic!("{} {overrides:?}: {e}", cmd.name()))
}

fn table(cmd: Command, overrides: &[(&str, &str)]) -> CsvTable {
    run(cmd, overrides).table
}

fn quantity(t: &CsvTable, name: &str) -> String {
    t.rows.iter().find(|r| r[0] == name).unwrap_or_else(|| panic!("missing quantity {name}"))[1].clone()
}

fn qf(t: &CsvTable, name: &str) -> f64 {
    quantity(t, name).parse().unwrap_or_else(|_| panic!("{name} is not a number"))
}

fn column(t: &CsvTable, name: &str) -> Vec<String> {
    let i = t.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("missing column {name}"));
    t.rows.iter().map(|r| r[i].clone()).collect()
}

fn fcolumn(t: &CsvTable, name: &str) -> Vec<f64> {
    column(t, name).iter().map(|v| v.parse().expect("number")).collect()
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::MIN, f64::max);
    let lo = v.iter().copied().fold(f64::MAX, f64::min);
    hi / lo
}

struct Report {
    unexpected: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, clauses: &[(&str, bool)], detail: String, started: Instant) {
        let ok = clauses.iter().all(|(_, p)| *p);
        let failed: Vec<&str> = clauses.iter().filter(|(_, p)| !p).map(|(n, _)| *n).collect();
        let verdict = if ok { "PASS" } else { "FAIL" };
        let mut msg = format!("{id} {verdict}  {detail}");
        if !ok {
            msg.push_str(&format!("  failed: {}", failed.join(", ")));
            if KNOWN_FAILURES.contains(&id) {
                msg.push_str("  (known)");
            } else {
                self.unexpected.push(id.to_string());
            }
        }
        println!("{msg}  [{:.0} s]", started.elapsed().as_secs_f64());
    }
}

fn ac1(r: &mut Report) {
    let t0 = Instant::now();
    let f2 = table(Command::ReproCheck, &[("kernel", "f2")]);
    let w = table(Command::ReproCheck, &[("kernel", "wavelet")]);
    let rf = qf(&f2, "idempotency_residual");
    let rw = qf(&w, "idempotency_residual");
    let rs: Vec<f64> = (1..=3).map(|i| qf(&w, &format!("signal_{i}_residual"))).collect();
    r.line(
        "AC-1",
        &[("F2 idempotency", rf <= 1e-2), ("wavelet idempotency", rw <= 1e-2), ("signals", rs.iter().all(|x| *x <= 1e-2))],
        format!("f2={rf:.2e} wavelet={rw:.2e} signals={:.2e},{:.2e},{:.2e}", rs[0], rs[1], rs[2]),
        t0,
    );
}

fn ac2(r: &mut Report) {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in ["2", "3"] {
        for p in ["1", "1.5", "2"] {
            let t = table(Command::LpScan, &[("n", n), ("p", p)]);
            let last = t.rows.last().expect("rows");
            let verdict = last[3].clone();
            let np: f64 = n.parse::<f64>().unwrap() * p.parse::<f64>().unwrap();
            let expected = if np > 2.0 { "converged" } else { "diverged" };
            ok &= verdict == expected;
            detail.push(format!("({n},{p})={verdict}"));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    r.line("AC-2", &[("verdicts", ok), ("runtime", secs <= 60.0)], detail.join(" "), t0);
}

fn ac3(r: &mut Report) {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (eps, expected) in [("0", "diverged"), ("0.5", "converged"), ("1", "converged"), ("1.5", "converged"), ("2", "diverged")] {
        let t = table(Command::WeightedInt, &[("eps", eps)]);
        let verdict = t.rows.last().expect("rows")[3].clone();
        ok &= verdict == expected;
        detail.push(format!("eps={eps}:{verdict}"));
    }
    r.line("AC-3", &[("verdicts", ok)], detail.join(" "), t0);
}

fn ac4(r: &mut Report) {
    let t0 = Instant::now();
    let t = table(Command::Dp, &[]);
    let p = fcolumn(&t, "p");
    let bound = fcolumn(&t, "bound");
    let emp = fcolumn(&t, "empirical");
    let at = |x: f64| p.iter().position(|v| *v == x).expect("p value");
    let e2 = emp[at(2.0)];
    let below = [1.5, 3.0].iter().all(|x| emp[at(*x)] <= bound[at(*x)]);
    r.line(
        "AC-4",
        &[("p=2 near 1", (e2 - 1.0).abs() <= 2e-2), ("bound dominates", below)],
        format!(
            "p=2: {e2:.5}; p=1.5: {:.4} <= {:.4}; p=3: {:.4} <= {:.4}",
            emp[at(1.5)],
            bound[at(1.5)],
            emp[at(3.0)],
            bound[at(3.0)]
        ),
        t0,
    );
}

fn ac5(r: &mut Report) {
    let t0 = Instant::now();
    let deltas = [1.01, 1.0825, 1.155, 1.2275, 1.3];
    let gammas = [0.01, 0.0825, 0.155, 0.2275, 0.3];
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let t = table(Command::Osc, &[("delta", &join(&deltas)), ("gamma", &join(&gammas))]);
    let bound = fcolumn(&t, "eps_bound");
    let meas = fcolumn(&t, "eps_measured");
    let dominated = bound.iter().zip(&meas).all(|(b, m)| m <= b);
    let idx = |i: usize, j: usize| i * gammas.len() + j;
    let mut monotone = true;
    for i in 0..deltas.len() {
        for j in 0..gammas.len() {
            if i + 1 < deltas.len() {
                monotone &= meas[idx(i, j)] <= meas[idx(i + 1, j)] + 1e-3;
            }
            if j + 1 < gammas.len() {
                monotone &= meas[idx(i, j)] <= meas[idx(i, j + 1)] + 1e-3;
            }
        }
    }
    let worst = bound.iter().zip(&meas).map(|(b, m)| m / b).fold(0.0, f64::max);
    r.line(
        "AC-5",
        &[("measured <= bound", dominated), ("monotone", monotone)],
        format!("25 windows, max measured/bound = {worst:.3}"),
        t0,
    );
}

fn ac6(r: &mut Report) {
    let t0 = Instant::now();
    let coarse = run(Command::Atomic, &[]);
    let fine = run(Command::Atomic, &[("a0", "2^0.125"), ("b0", "0.125")]);
    let (c, f) = (&coarse.table, &fine.table);
    let defect = qf(c, "i_minus_t_max");
    let max_ratio = qf(c, "max_ratio");
    let (ec, ef) = (qf(c, "relative_error"), qf(f, "relative_error"));
    r.line(
        "AC-6",
        &[
            ("probe defect < 1", defect < 1.0),
            ("geometric decrease", coarse.status == Status::Success && max_ratio < 1.0),
            ("error <= 5%", ec <= 0.05),
            ("halving reduces error", ef < ec),
        ],
        format!(
            "|I-T| max {defect:.3}; {} iterations, max ratio {max_ratio:.3}; error {ec:.2e} ({} atoms) vs halved {ef:.2e} ({} atoms)",
            quantity(c, "iterations"),
            quantity(c, "atoms"),
            quantity(f, "atoms")
        ),
        t0,
    );
}

fn ac7(r: &mut Report) {
    let t0 = Instant::now();
    let cfg = {
        let mut c = Config::with_defaults(Command::SobolevCheck.defaults());
        Command::SobolevCheck.derive(&mut c).expect("derive");
        c
    };
    let rows = sobolev_rows(&cfg).expect("sobolev");
    let small = rows.iter().all(|(_, res, _, _, _)| *res <= 1e-2);
    let halves = rows.iter().all(|(_, res, fine, _, _)| (0.35..=0.65).contains(&(fine / res)));
    let detail = rows
        .iter()
        .map(|(g, res, fine, _, _)| format!("{g:?}: {res:.2e} -> {fine:.2e} (ratio {:.3})", fine / res))
        .collect::<Vec<_>>()
        .join("; ");
    r.line("AC-7", &[("residual <= 1e-2", small), ("halves +-30%", halves)], detail, t0);
}

fn ac8(r: &mut Report) {
    let t0 = Instant::now();
    let tiled = table(Command::Cyclic, &[("tile", "true")]);
    let other = table(Command::Cyclic, &[("omega", "0,1,2,4")]);
    let s3 = table(Command::FiniteGroup, &[]);
    let (rt, ro) = (qf(&tiled, "residual"), qf(&other, "residual"));
    let (id, pl) = (qf(&s3, "identity_deviation"), qf(&s3, "plancherel_difference"));
    r.line(
        "AC-8",
        &[
            ("tiling exact", rt <= 1e-12 && quantity(&tiled, "sample_points") == "0 3 6 9"),
            ("non-tiling detected", ro > 1e-6),
            ("S3 identity", id <= 1e-12),
            ("Plancherel", pl <= 1e-12),
        ],
        format!("tiling {rt:.1e}; non-tiling {ro:.3}; S3 identity {id:.1e}; Plancherel {pl:.1e}"),
        t0,
    );
}

fn ac9(r: &mut Report) {
    let t0 = Instant::now();
    let mut ok_window = true;
    let mut ok_samples = true;
    let mut detail = Vec::new();
    for rate in ["1", "2.5"] {
        let t = table(Command::Shannon, &[("rate", rate)]);
        let (e, s) = (qf(&t, "max_abs_err"), qf(&t, "max_err_at_samples"));
        ok_window &= e <= 1e-6 && qf(&t, "samples") >= 1e4;
        ok_samples &= s <= 1e-12;
        detail.push(format!("R={rate}: max {e:.2e}, at samples {s:.1e}"));
    }
    r.line("AC-9", &[("exact at samples", ok_samples), ("window error", ok_window)], detail.join("; "), t0);
}

fn ac10(r: &mut Report) {
    let t0 = Instant::now();
    let besov = fcolumn(&table(Command::BesovCompare, &[]), "ratio");
    let b2 = fcolumn(&table(Command::BergmanCompare, &[("n", "2")]), "ratio");
    let b3 = fcolumn(&table(Command::BergmanCompare, &[("n", "3")]), "ratio");
    let (sb, s2, s3) = (spread(&besov), spread(&b2), spread(&b3));
    r.line(
        "AC-10",
        &[
            ("besov family of 10", besov.len() == 10 && sb <= 10.0),
            ("bergman n=2", b2.len() == 10 && s2 <= 10.0),
            ("bergman n=3", b3.len() == 10 && s3 <= 10.0),
        ],
        format!("spreads: besov {sb:.3}, bergman n=2 {s2:.4}, n=3 {s3:.4}"),
        t0,
    );
}

const DETERMINISM_RUNS: &[&[&str]] = &[
    &["repro-check", "--kernel", "f2", "--na", "33", "--nb", "65"],
    &["repro-check", "--kernel", "wavelet", "--na", "17", "--nb", "97"],
    &["lp-scan", "--n", "3", "--p", "1.5"],
    &["weighted-int", "--eps", "0.5"],
    &["dp", "--na", "17", "--nb", "49"],
    &["osc", "--delta", "1.01,1.3", "--gamma", "0.01,0.3"],
    &["atomic", "--tol", "1e-2"],
    &["sobolev-check", "--na", "25", "--nb", "21"],
    &["besov-compare", "--na", "17", "--nb", "97"],
    &["shannon", "--N", "500", "--table", "points"],
    &["cyclic", "--tile"],
    &["cyclic", "--N", "16", "--omega", "1:3,7,11", "--seed", "9"],
    &["finite-group"],
    &["bergman-compare", "--na", "33", "--nb", "129"],
];

fn invoke(args: &[&str], threads: &str) -> (Option<i32>, Vec<u8>) {
    let out = Process::new(env!("CARGO_BIN_EXE_coorbit"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("spawn coorbit");
    (out.status.code(), out.stdout)
}

fn ac11(r: &mut Report) {
    let t0 = Instant::now();
    let mut mismatches = Vec::new();
    for args in DETERMINISM_RUNS {
        let first = invoke(args, "1");
        let again = invoke(args, "1");
        let wide = invoke(args, "4");
        if first.0 != Some(0) || first != again || first != wide {
            mismatches.push(args.join(" "));
        }
    }
    r.line(
        "AC-11",
        &[("byte-identical", mismatches.is_empty())],
        if mismatches.is_empty() {
            format!("{} invocations x 3 runs (1, 1, 4 workers)", DETERMINISM_RUNS.len())
        } else {
            format!("differing or failing: {}", mismatches.join(" | "))
        },
        t0,
    );
}

fn main() {
    let mut r = Report { unexpected: Vec::new() };
    let criteria: [fn(&mut Report); 11] = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11];
    for c in criteria {
        c(&mut r);
    }
    if !r.unexpected.is_empty() {
        eprintln!("unexpected failures: {}", r.unexpected.join(", "));
        std::process::exit(1);
    }
}
