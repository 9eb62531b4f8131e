//! Plain-text formats: headerless numeric CSV for data and chains, and flat
//! `key = value` summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bingham_core::UnitVector;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Unit-norm tolerance for rows of a data file before renormalisation.
pub const DATA_NORM_TOLERANCE: f64 = 1e-8;

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Parses headerless rows of a fixed width. `width = None` takes the width
/// of the first row. Blank lines are skipped; row numbers in errors are
/// 1-based line numbers.
pub fn parse_rows(text: &str, width: Option<usize>) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rows = Vec::new();
    let mut expected = width;
    for (lineno, line) in text.lines().enumerate() {
        let row = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|f| {
                let f = f.trim();
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Data(format!("row {row}: invalid number '{f}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let w = *expected.get_or_insert(values.len());
        if values.len() != w {
            return Err(CliError::Data(format!(
                "row {row}: expected {w} columns, got {}",
                values.len()
            )));
        }
        rows.push(values);
    }
    Ok(rows)
}

pub fn format_rows<'a, I>(rows: I) -> String
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Reads a data file of unit vectors (one per row, `q` columns).
pub fn parse_unit_vectors(text: &str) -> Result<Vec<UnitVector>, CliError> {
    let rows = parse_rows(text, None)?;
    if rows.is_empty() {
        return Err(CliError::Data("data file contains no rows".into()));
    }
    let mut row_numbers = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, _)| i + 1);
    rows.into_iter()
        .map(|coords| {
            let row = row_numbers.next().unwrap_or(0);
            let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > DATA_NORM_TOLERANCE {
                return Err(CliError::Data(format!(
                    "row {row}: vector norm {norm} is not within {DATA_NORM_TOLERANCE:e} of 1"
                )));
            }
            UnitVector::new(coords).map_err(|e| CliError::Data(format!("row {row}: {e}")))
        })
        .collect()
}

/// Columns of a chain file.
pub fn parse_chain(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = parse_rows(text, None)?;
    let width = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| CliError::Data("chain file contains no draws".into()))?;
    Ok((0..width).map(|k| rows.iter().map(|r| r[k]).collect()).collect())
}

/// Ordered `key = value` pairs.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct KeyValues(pub Vec<(String, String)>);

impl KeyValues {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    pub fn extend(&mut self, other: &KeyValues) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut kv = KeyValues::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Data(format!("line {}: expected 'key = value'", i + 1)))?;
            kv.push(k.trim(), v.trim());
        }
        Ok(kv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_row_is_named() {
        let err = parse_unit_vectors("1,0,0\n0.1,0.2\n").unwrap_err();
        assert_eq!(err.to_string(), "row 2: expected 3 columns, got 2");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn bad_number_is_named() {
        let err = parse_rows("1,0\n0,x\n", None).unwrap_err();
        assert!(err.to_string().starts_with("row 2: invalid number"));
    }

    #[test]
    fn non_unit_rows_are_rejected() {
        assert!(parse_unit_vectors("1,1,0\n").is_err());
        let v = parse_unit_vectors("1.000000001,0,0\n").unwrap();
        assert_eq!(v[0].coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn blank_lines_are_skipped() {
        assert_eq!(parse_rows("1,2\n\n3,4\n", None).unwrap().len(), 2);
    }

    #[test]
    fn key_values_round_trip() {
        let mut kv = KeyValues::default();
        kv.push("mean.lambda1", 0.5);
        kv.push("b", "auto");
        let back = KeyValues::parse(&kv.render()).unwrap();
        assert_eq!(back, kv);
        assert_eq!(back.get_f64("mean.lambda1"), Some(0.5));
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
