//! Resolved experiment configuration: defaults, then a `key=value` file, then flags.

use coorbit_core::{CoorbitError, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// Flags that take a value, with their help text.
pub const VALUE_FLAGS: &[(&str, &str)] = &[
    ("grid-amin", "smallest dilation of the grid"),
    ("grid-amax", "largest dilation of the grid"),
    ("na", "number of dilation nodes"),
    ("bmax", "translation half-width of the grid"),
    ("nb", "number of translation nodes"),
    ("n", "discrete-series weight"),
    ("p", "Lebesgue exponent"),
    ("q", "outer Lebesgue exponent"),
    ("s", "smoothness"),
    ("a0", "lattice dilation step"),
    ("b0", "lattice translation step"),
    ("jrange", "dilation index range lo:hi (half-open)"),
    ("krange", "translation index range lo:hi (half-open)"),
    ("delta", "window dilation radius (comma list allowed)"),
    ("gamma", "window translation radius (comma list allowed)"),
    ("rate", "sampling rate R"),
    ("N", "group order, or sample half-count for shannon"),
    ("omega", "band: indices and lo:hi ranges, comma separated"),
    ("tol", "tolerance"),
    ("max-iter", "iteration limit"),
    ("seed", "random seed"),
    ("kernel", "f<n> or wavelet"),
    ("m", "number of samples for cyclic sampling"),
    ("doublings", "number of domain doublings"),
    ("eps", "weight exponent"),
    ("region", "atomic region a_min:a_max:b_max"),
    ("eval", "evaluation box a_min:a_max:b_max"),
    ("target", "target translate a,b"),
    ("samples", "window sample count per axis"),
    ("table", "output table: summary or a command-specific detail table"),
    ("group-table", "CSV multiplication table of a finite group"),
    ("irreps", "comma separated irrep CSV files"),
    ("width", "bump width"),
    ("probes", "number of probe atoms"),
];

/// Keys excluded from the recorded configuration because they name local paths.
pub const UNRECORDED: &[&str] = &["out", "config"];

/// Flat string map of every parameter a run uses.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn with_defaults(defaults: &[(&str, &str)]) -> Self {
        Config { values: defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn merge(&mut self, other: &BTreeMap<String, String>) {
        for (k, v) in other {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter()
    }

    pub fn raw(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CoorbitError::InvalidParameter(format!("--{key} is required")))
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.raw(key)?;
        parse_number(v).ok_or_else(|| CoorbitError::InvalidParameter(format!("--{key}: not a number: {v}")))
    }

    pub fn positive(&self, key: &str) -> Result<f64> {
        let v = self.f64(key)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(CoorbitError::InvalidParameter(format!("--{key} must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| CoorbitError::InvalidParameter(format!("--{key}: not a count: {v}")))
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| CoorbitError::InvalidParameter(format!("--{key}: not an unsigned integer: {v}")))
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.values.get(key).map(String::as_str) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(CoorbitError::InvalidParameter(format!("--{key}: expected true or false, got {v}"))),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.raw(key)?
            .split(',')
            .map(|t| parse_number(t.trim()).ok_or_else(|| CoorbitError::InvalidParameter(format!("--{key}: not a number: {t}"))))
            .collect()
    }

    /// `lo:hi` as the inclusive pair `(lo, hi - 1)`; absent or empty means unrestricted.
    pub fn index_range(&self, key: &str) -> Result<Option<(i64, i64)>> {
        match self.values.get(key).map(String::as_str) {
            None | Some("") | Some("all") => Ok(None),
            Some(v) => {
                let bad = || CoorbitError::InvalidParameter(format!("--{key}: expected lo:hi, got {v}"));
                let (lo, hi) = v.split_once(':').ok_or_else(bad)?;
                let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
                if hi <= lo {
                    return Err(CoorbitError::InvalidParameter(format!("--{key}: empty range {v}")));
                }
                Ok(Some((lo, hi - 1)))
            }
        }
    }

    /// Band syntax: `0:4` is `{0, 1, 2, 3}`; pieces may be joined by commas.
    pub fn index_set(&self, key: &str) -> Result<Vec<usize>> {
        let v = self.raw(key)?;
        let bad = || CoorbitError::InvalidParameter(format!("--{key}: expected indices or lo:hi ranges, got {v}"));
        let mut out = Vec::new();
        for piece in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match piece.split_once(':') {
                Some((lo, hi)) => {
                    let (lo, hi): (usize, usize) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
                    out.extend(lo..hi);
                }
                None => out.push(piece.parse().map_err(|_| bad())?),
            }
        }
        if out.is_empty() {
            return Err(bad());
        }
        Ok(out)
    }

    /// `x:y:z` triple.
    pub fn triple(&self, key: &str) -> Result<(f64, f64, f64)> {
        let v = self.raw(key)?;
        let parts: Vec<Option<f64>> = v.split(':').map(|t| parse_number(t.trim())).collect();
        match parts.as_slice() {
            [Some(a), Some(b), Some(c)] => Ok((*a, *b, *c)),
            _ => Err(CoorbitError::InvalidParameter(format!("--{key}: expected x:y:z, got {v}"))),
        }
    }

    /// `x,y` pair.
    pub fn pair(&self, key: &str) -> Result<(f64, f64)> {
        let v = self.f64_list(key)?;
        match v.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(CoorbitError::InvalidParameter(format!("--{key}: expected two numbers"))),
        }
    }
}

/// Plain numbers plus `2^x` and `1/x`, e.g. `2^0.25` or `1/64`.
pub fn parse_number(s: &str) -> Option<f64> {
    if let Some((b, e)) = s.split_once('^') {
        return Some(parse_number(b)?.powf(parse_number(e)?));
    }
    if let Some((n, d)) = s.split_once('/') {
        return Some(parse_number(n)? / parse_number(d)?);
    }
    s.parse().ok()
}

/// Reads `key=value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CoorbitError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CoorbitError::Parse(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if k != "tile" && !VALUE_FLAGS.iter().any(|(name, _)| *name == k) {
            return Err(CoorbitError::Parse(format!("config line {}: unknown key {k}", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_ranges() {
        assert_eq!(parse_number("2^-6"), Some(1.0 / 64.0));
        assert_eq!(parse_number("1/4"), Some(0.25));
        let mut c = Config::default();
        c.set("omega", "0:3,5");
        assert_eq!(c.index_set("omega").unwrap(), vec![0, 1, 2, 5]);
        c.set("jrange", "-2:3");
        assert_eq!(c.index_range("jrange").unwrap(), Some((-2, 2)));
        c.set("jrange", "3:3");
        assert!(c.index_range("jrange").is_err());
    }

    #[test]
    fn config_file_syntax() {
        let m = parse_config("# comment\np = 1.5\n--seed=7 # trailing\n").unwrap();
        assert_eq!(m.get("p").unwrap(), "1.5");
        assert_eq!(m.get("seed").unwrap(), "7");
        assert!(parse_config("bogus=1").is_err());
        assert!(parse_config("p").is_err());
    }
}
