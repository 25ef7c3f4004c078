//! Plain-text matrix format.
//!
//! ```text
//! # optional comments
//! 3 3
//! 010
//! 1 0 1
//! 100
//! ```
//!
//! Lines starting with `#` and blank lines are ignored anywhere. The header
//! holds `ROWS COLS`; each of the following `ROWS` lines holds `COLS` digits
//! from `{0, 1}`, with spaces ignored. Writers emit no spaces.

use thiserror::Error;

use super::BoolMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing \"ROWS COLS\" header")]
    MissingHeader,
    #[error("line {line}: malformed header {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: matrix dimensions must be positive")]
    EmptyDimensions { line: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("line {line}: expected {expected} entries, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: invalid character {ch:?}")]
    BadChar { line: usize, ch: char },
    #[error("line {line}: unexpected content after the last row")]
    TrailingContent { line: usize },
}

/// Parses the text format; see the module docs.
pub fn parse_matrix(input: &str) -> Result<BoolMatrix, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let bad_header = || ParseError::BadHeader {
        line: hline,
        text: header.to_string(),
    };
    let mut fields = header.split_whitespace();
    let rows: usize = fields
        .next()
        .and_then(|f| f.parse().ok())
        .ok_or_else(bad_header)?;
    let cols: usize = fields
        .next()
        .and_then(|f| f.parse().ok())
        .ok_or_else(bad_header)?;
    if fields.next().is_some() {
        return Err(bad_header());
    }
    if rows == 0 || cols == 0 {
        return Err(ParseError::EmptyDimensions { line: hline });
    }

    // Rows are validated before the matrix is allocated, so the allocation is
    // bounded by the input length rather than by the header.
    let mut parsed: Vec<Vec<usize>> = Vec::new();
    for (line, text) in lines {
        if parsed.len() == rows {
            return Err(ParseError::TrailingContent { line });
        }
        let mut ones = Vec::new();
        let mut count = 0usize;
        for ch in text.chars() {
            match ch {
                '0' => count += 1,
                '1' => {
                    ones.push(count);
                    count += 1;
                }
                c if c.is_whitespace() => {}
                c => return Err(ParseError::BadChar { line, ch: c }),
            }
        }
        if count != cols {
            return Err(ParseError::RowLength {
                line,
                expected: cols,
                found: count,
            });
        }
        parsed.push(ones);
    }
    if parsed.len() != rows {
        return Err(ParseError::RowCount {
            expected: rows,
            found: parsed.len(),
        });
    }

    let mut m = BoolMatrix::zeros(rows, cols).expect("positive dimensions");
    for (i, ones) in parsed.iter().enumerate() {
        for &j in ones {
            m.set(i, j, true);
        }
    }
    Ok(m)
}

impl std::str::FromStr for BoolMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_matrix(s)
    }
}
