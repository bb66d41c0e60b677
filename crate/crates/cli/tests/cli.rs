use coorbit_core::io::{parse_key_values, CsvTable};
use std::process::{Command, Output};

fn coorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coorbit")).args(args).output().expect("spawn coorbit")
}

fn stdout_table(o: &Output) -> CsvTable {
    CsvTable::read_from(o.stdout.as_slice()).expect("csv")
}

fn header(t: &CsvTable) -> std::collections::BTreeMap<String, String> {
    t.comments.iter().skip(1).flat_map(|c| parse_key_values(c)).collect()
}

#[test]
fn header_records_every_parameter() {
    let o = coorbit(&["cyclic", "--tile"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout_table(&o);
    assert!(t.comments[0].starts_with("coorbit cyclic "));
    let h = header(&t);
    for key in ["N", "omega", "seed", "table", "tile", "m"] {
        assert!(h.contains_key(key), "missing {key}");
    }
    assert_eq!(h["tile"], "true");
    assert_eq!(t.columns, vec!["quantity", "value"]);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# cyclic run\nN = 16\nomega = 0:4\nseed = 3\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = coorbit(&["cyclic", "--config", cfg.to_str().unwrap(), "--seed", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let t = CsvTable::read_from(std::fs::read(&out).unwrap().as_slice()).unwrap();
    let h = header(&t);
    assert_eq!(h["N"], "16");
    assert_eq!(h["seed"], "5");
    assert!(!h.contains_key("config") && !h.contains_key("out"));
}

#[test]
fn invalid_input_exits_with_one() {
    assert_eq!(coorbit(&["cyclic", "--omega", "0,1,2,4", "--tile"]).status.code(), Some(1));
    assert_eq!(coorbit(&["cyclic", "--N", "12", "--omega", "0:5"]).status.code(), Some(1));
    assert_eq!(coorbit(&["shannon", "--rate", "-1"]).status.code(), Some(1));
    assert_eq!(coorbit(&["osc", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(coorbit(&["nonsense"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "unknown=1\n").unwrap();
    assert_eq!(coorbit(&["cyclic", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn stopped_iteration_exits_with_two() {
    let o = coorbit(&["atomic", "--tol", "1e-12", "--max-iter", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let t = stdout_table(&o);
    let converged = t.rows.iter().find(|r| r[0] == "converged").unwrap();
    assert_eq!(converged[1], "false");
}

#[test]
fn repro_check_reports_within_tolerance() {
    let o = coorbit(&["repro-check", "--kernel", "f2", "--grid-amin", "1/16", "--grid-amax", "16", "--na", "65", "--bmax", "32", "--nb", "129"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout_table(&o);
    assert!(t.rows.iter().any(|r| r[0] == "idempotency_residual"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(coorbit(&["--help"]).status.code(), Some(0));
    assert_eq!(coorbit(&["--version"]).status.code(), Some(0));
}
