//! Parity-check matrix text formats.
//!
//! * `dense`: an optional header line `# n=<n> m=<m>` followed by one line of
//!   `0`/`1` characters per row.
//! * `alist` (MacKay): `n m`, then the maximum column and row degrees, the
//!   column degrees, the row degrees, one line of 1-based row indices per
//!   column and one line of 1-based column indices per row. Zero padding after
//!   the listed entries is accepted on read and never written.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{iter_ones, BinaryMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    Dense,
    Alist,
}

impl MatrixFormat {
    /// Guess from a file extension; `.alist` selects alist, anything else dense.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("alist") => MatrixFormat::Alist,
            _ => MatrixFormat::Dense,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn load_matrix(text: &str, format: MatrixFormat) -> Result<LinearCode> {
    let h = match format {
        MatrixFormat::Dense => parse_dense(text)?,
        MatrixFormat::Alist => parse_alist(text)?,
    };
    Ok(LinearCode::from_parity_check(h))
}

pub fn save_matrix(h: &BinaryMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Dense => write_dense(h),
        MatrixFormat::Alist => write_alist(h),
    }
}

pub fn load_matrix_file(path: &Path, format: MatrixFormat) -> Result<LinearCode> {
    let text = std::fs::read_to_string(path)?;
    load_matrix(&text, format)
}

pub fn save_matrix_file(h: &BinaryMatrix, path: &Path, format: MatrixFormat) -> Result<()> {
    std::fs::write(path, save_matrix(h, format))?;
    Ok(())
}

fn parse_header(line: &str, lineno: usize) -> Result<(Option<usize>, Option<usize>)> {
    let mut n = None;
    let mut m = None;
    for tok in line.trim_start_matches('#').split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("malformed header token {tok:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_err(lineno, format!("malformed header value {value:?}")))?;
        match key {
            "n" => n = Some(value),
            "m" => m = Some(value),
            other => return Err(parse_err(lineno, format!("unknown header key {other:?}"))),
        }
    }
    Ok((n, m))
}

fn parse_dense(text: &str) -> Result<BinaryMatrix> {
    let mut header = (None, None);
    let mut rows = Vec::new();
    let mut row_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if !rows.is_empty() {
                return Err(parse_err(i + 1, "header after matrix rows"));
            }
            header = parse_header(line, i + 1)?;
            continue;
        }
        rows.push(line);
        row_lines.push(i + 1);
    }
    let cols = header.0.or_else(|| rows.first().map(|r| r.len())).unwrap_or(0);
    if let Some(m) = header.1 {
        if m != rows.len() {
            return Err(parse_err(
                row_lines.last().copied().unwrap_or(1),
                format!("header declares {m} rows, found {}", rows.len()),
            ));
        }
    }
    let mut h = BinaryMatrix::zeros(rows.len(), cols);
    for (r, (line, &lineno)) in rows.iter().zip(&row_lines).enumerate() {
        if line.chars().count() != cols {
            return Err(parse_err(
                lineno,
                format!("expected {cols} symbols, found {}", line.chars().count()),
            ));
        }
        for (c, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => h.set(r, c, true),
                other => return Err(parse_err(lineno, format!("non-binary symbol {other:?}"))),
            }
        }
    }
    Ok(h)
}

fn write_dense(h: &BinaryMatrix) -> String {
    let mut out = format!("# n={} m={}\n", h.cols(), h.rows());
    out.push_str(&h.to_string());
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as parsed integers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<i64>)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| parse_err(i + 1, format!("expected an integer, found {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, nums));
        }
        Err(parse_err(0, format!("unexpected end of file while reading {what}")))
    }

    /// All remaining integers with their line numbers.
    fn rest(&mut self) -> Result<Vec<(usize, i64)>> {
        let mut out = Vec::new();
        for (i, raw) in self.inner.by_ref() {
            for t in raw.split_whitespace() {
                let v = t
                    .parse::<i64>()
                    .map_err(|_| parse_err(i + 1, format!("expected an integer, found {t:?}")))?;
                out.push((i + 1, v));
            }
        }
        Ok(out)
    }
}

fn to_count(v: i64, line: usize, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| parse_err(line, format!("negative {what}: {v}")))
}

fn parse_alist(text: &str) -> Result<BinaryMatrix> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (l, dims) = lines.next_numbers("dimensions")?;
    if dims.len() != 2 {
        return Err(parse_err(l, "first line must be `n m`"));
    }
    let n = to_count(dims[0], l, "length")?;
    let m = to_count(dims[1], l, "row count")?;

    let (l, maxdeg) = lines.next_numbers("maximum degrees")?;
    if maxdeg.len() != 2 {
        return Err(parse_err(l, "second line must hold the maximum column and row degrees"));
    }
    let (max_col, max_row) = (to_count(maxdeg[0], l, "degree")?, to_count(maxdeg[1], l, "degree")?);

    let (l, col_deg) = lines.next_numbers("column degrees")?;
    if col_deg.len() != n {
        return Err(parse_err(l, format!("expected {n} column degrees, found {}", col_deg.len())));
    }
    let col_deg = col_deg
        .iter()
        .map(|&d| to_count(d, l, "degree"))
        .collect::<Result<Vec<_>>>()?;
    let (l, row_deg) = lines.next_numbers("row degrees")?;
    if row_deg.len() != m {
        return Err(parse_err(l, format!("expected {m} row degrees, found {}", row_deg.len())));
    }
    let row_deg = row_deg
        .iter()
        .map(|&d| to_count(d, l, "degree"))
        .collect::<Result<Vec<_>>>()?;
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(parse_err(l, "a degree exceeds the declared maximum"));
    }

    // The lists are read as one token stream: a zero-degree list may be an
    // empty line, and zeros after a list are padding.
    let mut tokens = lines.rest()?.into_iter().peekable();
    let mut read_list = |degree: usize, bound: usize, what: &str| -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(degree);
        for _ in 0..degree {
            let (line, v) = tokens
                .next()
                .ok_or_else(|| parse_err(0, format!("unexpected end of file while reading {what}")))?;
            if v < 1 || v as usize > bound {
                return Err(parse_err(
                    line,
                    format!("index {v} outside 1..={bound} (alist indices are 1-based)"),
                ));
            }
            out.push(v as usize - 1);
        }
        while tokens.next_if(|&(_, v)| v == 0).is_some() {}
        Ok(out)
    };
    let mut by_cols = BinaryMatrix::zeros(m, n);
    for (c, &deg) in col_deg.iter().enumerate() {
        for r in read_list(deg, m, "column index lists")? {
            by_cols.set(r, c, true);
        }
    }
    let mut by_rows = BinaryMatrix::zeros(m, n);
    for (r, &deg) in row_deg.iter().enumerate() {
        for c in read_list(deg, n, "row index lists")? {
            by_rows.set(r, c, true);
        }
    }
    if let Some((line, v)) = tokens.next() {
        return Err(parse_err(line, format!("unexpected trailing entry {v}")));
    }
    if by_cols != by_rows {
        return Err(parse_err(0, "column lists and row lists describe different matrices"));
    }
    Ok(by_rows)
}

fn join(items: impl Iterator<Item = usize>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_alist(h: &BinaryMatrix) -> String {
    let t = h.transpose();
    let col_lists: Vec<Vec<usize>> = (0..t.rows()).map(|c| iter_ones(t.row_words(c)).collect()).collect();
    let row_lists: Vec<Vec<usize>> = (0..h.rows()).map(|r| iter_ones(h.row_words(r)).collect()).collect();
    let max_col = col_lists.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_lists.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.cols(), h.rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(col_lists.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(row_lists.iter().map(Vec::len)));
    for list in col_lists.iter().chain(&row_lists) {
        let _ = writeln!(out, "{}", join(list.iter().map(|&i| i + 1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::golay_extended;

    #[test]
    fn dense_without_header() {
        let code = load_matrix("11\n01\n", MatrixFormat::Dense).unwrap();
        assert_eq!((code.m(), code.n(), code.r()), (2, 2, 2));
    }

    #[test]
    fn dense_round_trip_golay() {
        let g = golay_extended();
        let text = save_matrix(g.parity_check(), MatrixFormat::Dense);
        assert!(text.starts_with("# n=24 m=12\n"));
        let back = load_matrix(&text, MatrixFormat::Dense).unwrap();
        assert_eq!(back.parity_check(), g.parity_check());
        assert_eq!(back.r(), 12);
    }

    #[test]
    fn alist_round_trip_golay() {
        let g = golay_extended();
        let text = save_matrix(g.parity_check(), MatrixFormat::Alist);
        let back = load_matrix(&text, MatrixFormat::Alist).unwrap();
        assert_eq!(back.parity_check(), g.parity_check());
        assert!(!text.split_whitespace().any(|t| t == "0"));
    }

    #[test]
    fn dense_errors() {
        assert!(matches!(load_matrix("101\n11\n", MatrixFormat::Dense), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_matrix("1a1\n", MatrixFormat::Dense), Err(Error::Parse { line: 1, .. })));
        assert!(load_matrix("# n=3 m=2\n101\n", MatrixFormat::Dense).is_err());
        assert!(load_matrix("# n=three\n101\n", MatrixFormat::Dense).is_err());
    }

    #[test]
    fn alist_zero_index_rejected() {
        // 2 columns, 1 row: the first column list names row 0
        let text = "2 1\n1 2\n1 1\n2\n0\n1\n1 2\n";
        let err = load_matrix(text, MatrixFormat::Alist).unwrap_err();
        assert!(err.to_string().contains("1-based"), "{err}");
    }

    #[test]
    fn alist_padding_tolerated() {
        // H = [1 1 0; 0 1 1], column lists padded to the max degree 2
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let code = load_matrix(text, MatrixFormat::Alist).unwrap();
        assert_eq!(code.parity_check().to_string(), "110\n011\n");
    }

    #[test]
    fn alist_inconsistent_lists_rejected() {
        let text = "2 1\n1 1\n1 0\n1\n1\n\n2\n";
        assert!(load_matrix(text, MatrixFormat::Alist).is_err());
    }
}
