//! alist parity-check files. Columns are variable nodes and rows are checks;
//! all indices are 1-based.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: row indices of each column>
//! <m lines: column indices of each row>
//! ```
//!
//! Index lists may be padded with zeros, which the reader skips.

use std::fmt;
use std::fmt::Write as _;

use geomcode_core::BinaryMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlistError {
    UnexpectedEof { expected: &'static str },
    BadNumber { line: usize, token: String },
    EmptyDimension,
    IndexOutOfRange { line: usize, index: usize, bound: usize },
    WeightMismatch { what: &'static str, index: usize, declared: usize, found: usize },
    /// The column lists and row lists describe different matrices.
    Inconsistent { row: usize, col: usize },
    DuplicateIndex { line: usize, index: usize },
}

impl fmt::Display for AlistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlistError::UnexpectedEof { expected } => write!(f, "unexpected end of file, expected {}", expected),
            AlistError::BadNumber { line, token } => write!(f, "line {}: '{}' is not a nonnegative integer", line, token),
            AlistError::EmptyDimension => write!(f, "matrix dimensions must be positive"),
            AlistError::IndexOutOfRange { line, index, bound } => {
                write!(f, "line {}: index {} outside 1..={}", line, index, bound)
            }
            AlistError::WeightMismatch { what, index, declared, found } => write!(
                f,
                "{} {} declares weight {} but lists {} indices",
                what,
                index + 1,
                declared,
                found
            ),
            AlistError::Inconsistent { row, col } => write!(
                f,
                "entry ({}, {}) appears in one index list but not the other",
                row + 1,
                col + 1
            ),
            AlistError::DuplicateIndex { line, index } => write!(f, "line {}: index {} repeated", line, index),
        }
    }
}

impl std::error::Error for AlistError {}

fn join(xs: impl Iterator<Item = usize>) -> String {
    let mut s = String::new();
    let mut xs = xs.peekable();
    if xs.peek().is_none() {
        return "0".to_string();
    }
    for (i, x) in xs.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{}", x).unwrap();
    }
    s
}

/// Serializes `h` without zero padding, except that an empty index list is
/// written as a single `0`.
pub fn to_alist(h: &BinaryMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let cols = h.col_supports();
    let rows: Vec<Vec<usize>> = (0..m).map(|r| h.row_support(r)).collect();
    let cw: Vec<usize> = cols.iter().map(Vec::len).collect();
    let rw: Vec<usize> = rows.iter().map(Vec::len).collect();
    let mut out = String::new();
    writeln!(out, "{} {}", n, m).unwrap();
    writeln!(
        out,
        "{} {}",
        cw.iter().copied().max().unwrap_or(0),
        rw.iter().copied().max().unwrap_or(0)
    )
    .unwrap();
    writeln!(out, "{}", join(cw.into_iter())).unwrap();
    writeln!(out, "{}", join(rw.into_iter())).unwrap();
    for c in &cols {
        writeln!(out, "{}", join(c.iter().map(|&r| r + 1))).unwrap();
    }
    for r in &rows {
        writeln!(out, "{}", join(r.iter().map(|&c| c + 1))).unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as numbers, with its 1-based line number.
    fn next(&mut self, expected: &'static str) -> Result<(usize, Vec<usize>), AlistError> {
        loop {
            let (i, line) = self.inner.next().ok_or(AlistError::UnexpectedEof { expected })?;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| AlistError::BadNumber {
                        line: i + 1,
                        token: t.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((i + 1, nums));
        }
    }

    /// Reads `count` numbers that may span several lines.
    fn numbers(&mut self, count: usize, expected: &'static str) -> Result<Vec<usize>, AlistError> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            out.extend(self.next(expected)?.1);
        }
        out.truncate(count);
        Ok(out)
    }
}

/// Parses an alist file, checking that the column and row lists agree.
pub fn from_alist(text: &str) -> Result<BinaryMatrix, AlistError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let dims = lines.numbers(2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(AlistError::EmptyDimension);
    }
    lines.numbers(2, "maximum weights")?;
    let cw = lines.numbers(n, "column weights")?;
    let rw = lines.numbers(m, "row weights")?;
    let mut h = BinaryMatrix::zeros(m, n);
    for (c, &w) in cw.iter().enumerate() {
        let (line, idx) = lines.next("column index list")?;
        let idx = nonzero(line, idx, m)?;
        if idx.len() != w {
            return Err(AlistError::WeightMismatch {
                what: "column",
                index: c,
                declared: w,
                found: idx.len(),
            });
        }
        for r in idx {
            h.set(r - 1, c, true);
        }
    }
    for (r, &w) in rw.iter().enumerate() {
        let (line, idx) = lines.next("row index list")?;
        let idx = nonzero(line, idx, n)?;
        if idx.len() != w {
            return Err(AlistError::WeightMismatch {
                what: "row",
                index: r,
                declared: w,
                found: idx.len(),
            });
        }
        if h.row_weight(r) != w {
            let c = idx.iter().map(|&c| c - 1).find(|&c| !h.get(r, c)).unwrap_or_else(|| {
                (0..n).find(|&c| h.get(r, c) && !idx.contains(&(c + 1))).unwrap()
            });
            return Err(AlistError::Inconsistent { row: r, col: c });
        }
        if let Some(&c) = idx.iter().find(|&&c| !h.get(r, c - 1)) {
            return Err(AlistError::Inconsistent { row: r, col: c - 1 });
        }
    }
    Ok(h)
}

fn nonzero(line: usize, idx: Vec<usize>, bound: usize) -> Result<Vec<usize>, AlistError> {
    let idx: Vec<usize> = idx.into_iter().filter(|&x| x != 0).collect();
    let mut seen = std::collections::BTreeSet::new();
    for &x in &idx {
        if x > bound {
            return Err(AlistError::IndexOutOfRange { line, index: x, bound });
        }
        if !seen.insert(x) {
            return Err(AlistError::DuplicateIndex { line, index: x });
        }
    }
    Ok(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_round_trip() {
        let h = BinaryMatrix::from_rows(&[[1u8, 1, 0, 1], [0, 1, 1, 0]]);
        let text = to_alist(&h);
        assert_eq!(text, "4 2\n2 3\n1 2 1 1\n3 2\n1\n1 2\n2\n1\n1 2 4\n2 3\n");
        assert_eq!(from_alist(&text).unwrap(), h);
        let sparse = BinaryMatrix::from_rows(&[[1u8, 0, 0], [0, 0, 1]]);
        assert_eq!(from_alist(&to_alist(&sparse)).unwrap(), sparse);
    }

    #[test]
    fn zero_padding_is_accepted() {
        let padded = "4 2\n2 3\n1 2 1 1\n3 2\n1 0\n1 2\n2 0\n1 0\n1 2 4\n2 3 0\n";
        let h = BinaryMatrix::from_rows(&[[1u8, 1, 0, 1], [0, 1, 1, 0]]);
        assert_eq!(from_alist(padded).unwrap(), h);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(from_alist("4 2\n"), Err(AlistError::UnexpectedEof { .. })));
        assert!(matches!(from_alist("4 x\n"), Err(AlistError::BadNumber { line: 1, .. })));
        assert_eq!(from_alist("0 2\n"), Err(AlistError::EmptyDimension));
        let oob = "1 1\n1 1\n1\n1\n2\n1\n";
        assert!(matches!(from_alist(oob), Err(AlistError::IndexOutOfRange { index: 2, .. })));
        let inconsistent = "2 1\n1 1\n1 1\n1\n1\n1\n1\n";
        assert!(matches!(from_alist(inconsistent), Err(AlistError::Inconsistent { .. })));
        let weight = "1 1\n1 1\n2\n1\n1\n1\n";
        assert!(matches!(from_alist(weight), Err(AlistError::WeightMismatch { .. })));
    }
}
