//! Plain CSV formats for grid functions, signals, tables and finite groups.
//!
//! Every file may start with `#` comment lines. Numbers are written with the
//! shortest representation that round-trips, so output is reproducible.

use crate::error::{CoorbitError, Result};
use crate::gelfand_sampling::finite::{FiniteGroupSpec, Irrep};
use crate::group_core::grid::{Chart, GridFunction, GridSpec, HaarGrid, Sheets};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

/// A CSV document: comment lines, a column header and rows of cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        CsvTable { comments: Vec::new(), columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) -> &mut Self {
        self.rows.push(row.into_iter().collect());
        self
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        Ok(())
    }

    pub fn to_string_lossless(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    /// Parses comments, the header line and comma-separated rows.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut t = CsvTable::default();
        let mut have_header = false;
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                t.comments.push(c.trim().to_string());
            } else if !have_header {
                t.columns = line.split(',').map(|s| s.trim().to_string()).collect();
                have_header = true;
            } else {
                let row: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
                if row.len() != t.columns.len() {
                    return Err(CoorbitError::Parse(format!("row has {} cells, header has {}", row.len(), t.columns.len())));
                }
                t.rows.push(row);
            }
        }
        if !have_header {
            return Err(CoorbitError::Parse("missing header line".into()));
        }
        Ok(t)
    }

    fn expect_columns(&self, want: &[&str]) -> Result<()> {
        if self.columns.iter().map(String::as_str).ne(want.iter().copied()) {
            return Err(CoorbitError::Parse(format!("expected columns {}, found {}", want.join(","), self.columns.join(","))));
        }
        Ok(())
    }
}

/// Shortest round-trip formatting, scientific for very small or large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| CoorbitError::Parse(format!("not a number: {s:?}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse::<usize>().map_err(|_| CoorbitError::Parse(format!("not an index: {s:?}")))
}

/// `key=value` pairs separated by whitespace, as in grid header lines.
pub fn parse_key_values(line: &str) -> BTreeMap<String, String> {
    line.split_whitespace()
        .filter_map(|kv| kv.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

/// The grid header line, without the leading `#`.
pub fn grid_header(spec: &GridSpec) -> String {
    let chart = match spec.chart {
        Chart::Affine => "affine",
        Chart::Matrix => "matrix",
    };
    let sheets = match spec.sheets {
        Sheets::Positive => "positive",
        Sheets::Both => "both",
    };
    format!(
        "chart={chart} sheets={sheets} a_min={} a_max={} N_a={} b_max={} N_b={}",
        fmt_f64(spec.a_min),
        fmt_f64(spec.a_max),
        spec.n_a,
        fmt_f64(spec.b_max),
        spec.n_b
    )
}

fn grid_from_header(comments: &[String]) -> Result<GridSpec> {
    for c in comments {
        let kv = parse_key_values(c);
        if !(kv.contains_key("a_min") && kv.contains_key("N_a")) {
            continue;
        }
        let get = |k: &str| kv.get(k).ok_or_else(|| CoorbitError::Parse(format!("grid header lacks {k}")));
        let chart = match kv.get("chart").map(String::as_str) {
            Some("affine") => Chart::Affine,
            Some("matrix") | None => Chart::Matrix,
            Some(o) => return Err(CoorbitError::Parse(format!("unknown chart {o}"))),
        };
        let sheets = match kv.get("sheets").map(String::as_str) {
            Some("both") => Sheets::Both,
            Some("positive") | None => Sheets::Positive,
            Some(o) => return Err(CoorbitError::Parse(format!("unknown sheets {o}"))),
        };
        return Ok(GridSpec {
            chart,
            sheets,
            a_min: parse_f64(get("a_min")?)?,
            a_max: parse_f64(get("a_max")?)?,
            n_a: parse_usize(get("N_a")?)?,
            b_max: parse_f64(get("b_max")?)?,
            n_b: parse_usize(get("N_b")?)?,
        });
    }
    Err(CoorbitError::Parse("no grid header line".into()))
}

/// `log_a,b,sign,re,im`, one row per node in storage order (sheet, then `a`, then `b`).
pub fn grid_function_table(f: &GridFunction) -> CsvTable {
    let g = &f.grid;
    let mut t = CsvTable::new(&["log_a", "b", "sign", "re", "im"]);
    t.comment(grid_header(g.spec()));
    for (k, v) in f.values.iter().enumerate() {
        let (s, i, m) = g.unindex(k);
        t.push([
            fmt_f64(g.log_a_nodes()[i]),
            fmt_f64(g.b_nodes()[m]),
            fmt_f64(g.sheet_sign(s)),
            fmt_f64(v.re),
            fmt_f64(v.im),
        ]);
    }
    t
}

/// Inverse of [`grid_function_table`]; node coordinates are checked against the header grid.
pub fn grid_function_from_table(t: &CsvTable) -> Result<GridFunction> {
    t.expect_columns(&["log_a", "b", "sign", "re", "im"])?;
    let grid: Arc<HaarGrid> = HaarGrid::new(grid_from_header(&t.comments)?)?;
    if t.rows.len() != grid.len() {
        return Err(CoorbitError::Parse(format!("expected {} rows, found {}", grid.len(), t.rows.len())));
    }
    let mut values = Vec::with_capacity(grid.len());
    for (k, r) in t.rows.iter().enumerate() {
        let (s, i, m) = grid.unindex(k);
        let (la, b, sg) = (parse_f64(&r[0])?, parse_f64(&r[1])?, parse_f64(&r[2])?);
        let tol = 1e-9 * (1.0 + la.abs() + b.abs());
        if (la - grid.log_a_nodes()[i]).abs() > tol || (b - grid.b_nodes()[m]).abs() > tol || sg != grid.sheet_sign(s) {
            return Err(CoorbitError::Parse(format!("row {k} does not match the grid node order")));
        }
        values.push(Complex64::new(parse_f64(&r[3])?, parse_f64(&r[4])?));
    }
    GridFunction::new(grid, values)
}

/// A sampled signal: `x,re,im` on the line, `index,re,im` on a discrete group, `xi,re,im` for spectra.
pub fn signal_table(coord: &str, points: &[f64], values: &[Complex64]) -> CsvTable {
    let mut t = CsvTable::new(&[coord, "re", "im"]);
    for (x, v) in points.iter().zip(values) {
        t.push([fmt_f64(*x), fmt_f64(v.re), fmt_f64(v.im)]);
    }
    t
}

/// `index,re,im` with integer indices.
pub fn discrete_signal_table(values: &[Complex64]) -> CsvTable {
    let mut t = CsvTable::new(&["index", "re", "im"]);
    for (i, v) in values.iter().enumerate() {
        t.push([i.to_string(), fmt_f64(v.re), fmt_f64(v.im)]);
    }
    t
}

/// Reads any of the three signal layouts; returns coordinates and values.
pub fn signal_from_table(t: &CsvTable) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if t.columns.len() != 3 || !["x", "index", "xi"].contains(&t.columns[0].as_str()) || t.columns[1] != "re" || t.columns[2] != "im" {
        return Err(CoorbitError::Parse(format!("not a signal table: {}", t.columns.join(","))));
    }
    let mut xs = Vec::with_capacity(t.rows.len());
    let mut vs = Vec::with_capacity(t.rows.len());
    for r in &t.rows {
        xs.push(parse_f64(&r[0])?);
        vs.push(Complex64::new(parse_f64(&r[1])?, parse_f64(&r[2])?));
    }
    Ok((xs, vs))
}

/// `quantity,value` report.
pub fn quantity_table(items: &[(&str, String)]) -> CsvTable {
    let mut t = CsvTable::new(&["quantity", "value"]);
    for (k, v) in items {
        t.push([k.to_string(), v.clone()]);
    }
    t
}

/// Reads `table_csv` (an `order x order` block of product indices, no header
/// names needed beyond the first line) and one `element,row,col,re,im` file per irrep.
pub fn load_finite_group(table_csv: &Path, irrep_csvs: &[&Path]) -> Result<FiniteGroupSpec> {
    let open = |p: &Path| -> Result<std::io::BufReader<std::fs::File>> {
        Ok(std::io::BufReader::new(std::fs::File::open(p).map_err(|e| CoorbitError::Io(format!("{}: {e}", p.display())))?))
    };
    let t = CsvTable::read_from(open(table_csv)?)?;
    let table = finite_table_from_csv(&t)?;
    let mut irreps = Vec::with_capacity(irrep_csvs.len());
    for p in irrep_csvs {
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        irreps.push(irrep_from_csv(&name, table.len(), &CsvTable::read_from(open(p)?)?)?);
    }
    FiniteGroupSpec::new(table, irreps)
}

/// The multiplication table: the header row names the columns, each row lists `x y` for every `y`.
pub fn finite_table_from_csv(t: &CsvTable) -> Result<Vec<Vec<usize>>> {
    let n = t.columns.len();
    if t.rows.len() != n {
        return Err(CoorbitError::InvalidGroup(format!("table has {} rows and {n} columns", t.rows.len())));
    }
    t.rows.iter().map(|r| r.iter().map(|c| parse_usize(c)).collect()).collect()
}

/// Multiplication table as CSV with columns `g0,...`.
pub fn finite_table_to_csv(spec: &FiniteGroupSpec) -> CsvTable {
    let names: Vec<String> = (0..spec.order).map(|i| format!("g{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = CsvTable::new(&refs);
    for row in &spec.table {
        t.push(row.iter().map(|v| v.to_string()));
    }
    t
}

/// `element,row,col,re,im` entries of one irrep.
pub fn irrep_to_csv(irrep: &Irrep) -> CsvTable {
    let mut t = CsvTable::new(&["element", "row", "col", "re", "im"]);
    for (x, m) in irrep.mats.iter().enumerate() {
        for i in 0..irrep.dim {
            for j in 0..irrep.dim {
                let v = m[(i, j)];
                t.push([x.to_string(), i.to_string(), j.to_string(), fmt_f64(v.re), fmt_f64(v.im)]);
            }
        }
    }
    t
}

pub fn irrep_from_csv(name: &str, order: usize, t: &CsvTable) -> Result<Irrep> {
    t.expect_columns(&["element", "row", "col", "re", "im"])?;
    let mut entries = Vec::with_capacity(t.rows.len());
    let mut dim = 0;
    for r in &t.rows {
        let (x, i, j) = (parse_usize(&r[0])?, parse_usize(&r[1])?, parse_usize(&r[2])?);
        if x >= order {
            return Err(CoorbitError::InvalidGroup(format!("irrep {name}: element {x} out of range")));
        }
        dim = dim.max(i + 1).max(j + 1);
        entries.push((x, i, j, Complex64::new(parse_f64(&r[3])?, parse_f64(&r[4])?)));
    }
    if entries.len() != order * dim * dim {
        return Err(CoorbitError::InvalidGroup(format!("irrep {name}: expected {} entries, found {}", order * dim * dim, entries.len())));
    }
    let mut mats = vec![DMatrix::from_element(dim, dim, Complex64::new(f64::NAN, 0.0)); order];
    for (x, i, j, v) in entries {
        mats[x][(i, j)] = v;
    }
    if mats.iter().any(|m| m.iter().any(|v| v.re.is_nan())) {
        return Err(CoorbitError::InvalidGroup(format!("irrep {name}: missing or duplicated entries")));
    }
    Ok(Irrep { name: name.to_string(), dim, mats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::grid::GridSpec;

    #[test]
    fn grid_function_round_trip() {
        for spec in [GridSpec::matrix(0.5, 2.0, 5, 1.0, 4), GridSpec::affine(Sheets::Both, 0.3, 3.0, 4, 2.0, 5)] {
            let g = HaarGrid::new(spec).unwrap();
            let f = g.sample_chart(|x, y| Complex64::new(x.sin() * 0.1, y / 3.0));
            let text = grid_function_table(&f).to_string_lossless();
            let back = grid_function_from_table(&CsvTable::read_from(text.as_bytes()).unwrap()).unwrap();
            assert_eq!(back.grid.spec(), f.grid.spec());
            assert_eq!(back.values, f.values);
        }
    }

    #[test]
    fn malformed_rows_rejected() {
        let bad = "# chart=matrix a_min=0.5 a_max=2 N_a=2 b_max=1 N_b=2\nlog_a,b,sign,re,im\n0,0,1,1\n";
        assert!(CsvTable::read_from(bad.as_bytes()).is_err());
        let short = "# chart=matrix a_min=0.5 a_max=2 N_a=2 b_max=1 N_b=2\nlog_a,b,sign,re,im\n0,0,1,1,0\n";
        assert!(grid_function_from_table(&CsvTable::read_from(short.as_bytes()).unwrap()).is_err());
    }

    #[test]
    fn signal_round_trip() {
        let xs = [0.0, 0.5, 1.0];
        let vs = [Complex64::new(1.0, -1.0), Complex64::new(0.25, 0.0), Complex64::new(-3.0, 1e-300)];
        let t = signal_table("x", &xs, &vs);
        let (bx, bv) = signal_from_table(&CsvTable::read_from(t.to_string_lossless().as_bytes()).unwrap()).unwrap();
        assert_eq!((bx.as_slice(), bv.as_slice()), (&xs[..], &vs[..]));
    }

    #[test]
    fn s3_round_trip_through_files() {
        let s3 = FiniteGroupSpec::s3();
        let dir = std::env::temp_dir().join(format!("coorbit-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let tp = dir.join("table.csv");
        std::fs::write(&tp, finite_table_to_csv(&s3).to_string_lossless()).unwrap();
        let mut paths = Vec::new();
        for ir in &s3.irreps {
            let p = dir.join(format!("{}.csv", ir.name));
            std::fs::write(&p, irrep_to_csv(ir).to_string_lossless()).unwrap();
            paths.push(p);
        }
        let refs: Vec<&Path> = paths.iter().map(|p| p.as_path()).collect();
        let back = load_finite_group(&tp, &refs).unwrap();
        assert_eq!(back.table, s3.table);
        assert_eq!(back.irreps.len(), 3);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
