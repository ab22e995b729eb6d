//! Plain-text matrix and permutation files.
//!
//! Matrices are comma-separated values with a `.` decimal point and an
//! optional single header row. Permutations are a single column of 1-based
//! indices. Writers emit shortest-roundtrip float formatting, so equal
//! values always produce equal bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::perm::Permutation;

pub fn parse_matrix(text: &str, has_header: bool) -> Result<DataMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if has_header && lineno == 0 {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                field.trim().parse::<f64>().map_err(|_| {
                    Error::Domain(format!(
                        "line {}: cannot parse '{}' as a number",
                        lineno + 1,
                        field.trim()
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    DataMatrix::from_rows(&rows)
}

pub fn read_matrix(path: &Path, has_header: bool) -> Result<DataMatrix<f64>> {
    parse_matrix(&fs::read_to_string(path)?, has_header)
}

pub fn format_matrix(m: &DataMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let mut first = true;
        for j in 0..m.p() {
            if !first {
                out.push(',');
            }
            write!(out, "{}", m.get(i, j)).expect("string write");
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, m: &DataMatrix<f64>) -> Result<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}

/// Reads a single column of 1-based indices.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mut mapping = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim().trim_end_matches(',');
        if t.is_empty() {
            continue;
        }
        let v: usize = t.parse().map_err(|_| {
            Error::Domain(format!(
                "line {}: cannot parse '{t}' as a 1-based index",
                lineno + 1
            ))
        })?;
        if v == 0 {
            return Err(Error::Domain(format!(
                "line {}: permutation indices are 1-based",
                lineno + 1
            )));
        }
        mapping.push(v - 1);
    }
    Permutation::from_mapping(mapping)
}

pub fn read_permutation(path: &Path) -> Result<Permutation> {
    parse_permutation(&fs::read_to_string(path)?)
}

pub fn format_permutation(pi: &Permutation) -> String {
    let mut out = String::new();
    for v in pi.iter() {
        writeln!(out, "{}", v + 1).expect("string write");
    }
    out
}

pub fn write_permutation(path: &Path, pi: &Permutation) -> Result<()> {
    fs::write(path, format_permutation(pi))?;
    Ok(())
}
