//! Plain-text matrix format.
//!
//! ```text
//! # comment lines start with '#'
//! k=3
//! 3 0
//! 0 2
//! 1 1
//! ```
//!
//! Each non-comment line is a row of whitespace-separated nonnegative
//! integers. The optional `k=<int>` header sets the entry bound; without it
//! the bound is the largest entry.

use thiserror::Error;

use crate::matrix::{KMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

pub fn parse_matrix(text: &str) -> Result<KMatrix, FormatError> {
    let mut k = None;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("k=") {
            if k.is_some() {
                return Err(syntax(line_no, "duplicate k= header"));
            }
            if !rows.is_empty() {
                return Err(syntax(line_no, "k= header must precede the rows"));
            }
            k = Some(v.trim().parse::<u32>().map_err(|e| syntax(line_no, format!("bad k: {e}")))?);
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<u32>().map_err(|_| syntax(line_no, format!("bad entry '{tok}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(syntax(
                    line_no,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(syntax(0, "no rows"));
    }
    Ok(KMatrix::from_rows(&rows, k)?)
}

/// Emit with an explicit `k=` header so the declared bound survives a round trip.
pub fn write_matrix(m: &KMatrix) -> String {
    format!("k={}\n{}\n", m.k(), m)
}
