//! Plain-text scheme files.
//!
//! ```text
//! # comment lines start with '#'
//! name = midpoint3
//! n = 3
//! matrices
//! 1 1/2 1/2
//! 0 1/2 0
//! 0 0 1/2
//!
//! 0 0 1/2
//! ...
//! ```
//!
//! After the `matrices` line every nonblank line is one matrix row of `n`
//! whitespace-separated integers or `p/q` rationals; each `n` consecutive rows
//! form one matrix. Column `j` of a matrix is vertex `j` of its subsimplex.
//! Blank lines between matrices are optional.

use std::fmt::Write as _;

use crate::form::Rational;
use crate::matrix::RatMatrix;
use crate::parse_rational;
use crate::subdivision::{SchemeError, SchemeSpec, SubdivisionScheme};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("{rows} matrix rows is not a multiple of n = {n}")]
    IncompleteMatrix { rows: usize, n: usize },
    #[error(transparent)]
    Invalid(#[from] SchemeError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Parses the text without validating the matrices.
pub fn parse_scheme_spec(text: &str) -> Result<SchemeSpec, SchemeFileError> {
    let mut name = None;
    let mut n: Option<usize> = None;
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut in_matrices = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| SchemeFileError::Syntax { line: line_no, message };
        if in_matrices {
            let values = line
                .split_whitespace()
                .map(|tok| parse_rational(tok).ok_or_else(|| syntax(format!("bad rational {tok:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let n = n.ok_or(SchemeFileError::MissingField("n"))?;
            if values.len() != n {
                return Err(syntax(format!("expected {n} entries, found {}", values.len())));
            }
            rows.push((line_no, values));
            continue;
        }
        if line == "matrices" || line == "matrices:" {
            in_matrices = true;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| syntax(format!("expected `key = value`, found {line:?}")))?;
        match key.trim() {
            "name" => name = Some(value.trim().to_string()),
            "n" => {
                n = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| syntax(format!("bad dimension {:?}", value.trim())))?,
                )
            }
            other => return Err(syntax(format!("unknown field {other:?}"))),
        }
    }
    let name = name.ok_or(SchemeFileError::MissingField("name"))?;
    let n = n.ok_or(SchemeFileError::MissingField("n"))?;
    if n == 0 {
        return Err(SchemeFileError::Invalid(SchemeError::BadDimension(0)));
    }
    if !in_matrices {
        return Err(SchemeFileError::MissingField("matrices"));
    }
    if !rows.len().is_multiple_of(n) {
        return Err(SchemeFileError::IncompleteMatrix { rows: rows.len(), n });
    }
    let matrices = rows
        .chunks(n)
        .map(|chunk| RatMatrix::from_rows(chunk.iter().map(|(_, r)| r.clone()).collect()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(SchemeError::from)?;
    Ok(SchemeSpec { name, n, matrices })
}

/// Parses and validates; any failed check rejects the file.
pub fn parse_scheme(text: &str) -> Result<SubdivisionScheme, SchemeFileError> {
    Ok(parse_scheme_spec(text)?.into_scheme()?)
}

pub fn load_scheme_spec(path: &std::path::Path) -> Result<SchemeSpec, SchemeFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemeFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scheme_spec(&text)
}

pub fn load_scheme(path: &std::path::Path) -> Result<SubdivisionScheme, SchemeFileError> {
    Ok(load_scheme_spec(path)?.into_scheme()?)
}

pub fn write_scheme(scheme: &SubdivisionScheme) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", scheme.name());
    let _ = writeln!(out, "n = {}", scheme.n());
    out.push_str("matrices\n");
    for (k, m) in scheme.matrices().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for row in m.matrix().rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    out
}
