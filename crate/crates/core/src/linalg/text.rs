//! Plain-text matrix format: optional `#` comment lines, a `ROWS COLS`
//! header, then one line of whitespace-separated rationals per row.

use std::fmt;
use std::str::FromStr;

use super::Matrix;
use crate::error::{Error, Result};
use crate::exact::Rational;

impl Matrix {
    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, line)| (no + 1, line.trim()))
            .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("missing \"ROWS COLS\" header".into()))?;
        let dims = header
            .split_whitespace()
            .map(|tok| tok.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("line {hline}: bad header {header:?}: {e}")))?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!(
                "line {hline}: header must be \"ROWS COLS\", got {header:?}"
            )));
        };
        if rows == 0 || cols == 0 {
            return Err(Error::Parse(format!(
                "line {hline}: dimensions must be positive"
            )));
        }

        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {r}")))?;
            let before = entries.len();
            for tok in line.split_whitespace() {
                let x = tok
                    .parse::<Rational>()
                    .map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
                entries.push(x);
            }
            let got = entries.len() - before;
            if got != cols {
                return Err(Error::Parse(format!(
                    "line {no}: expected {cols} entries, got {got}"
                )));
            }
        }
        if let Some((no, _)) = lines.next() {
            return Err(Error::Parse(format!(
                "line {no}: unexpected content after {rows} rows"
            )));
        }
        Matrix::new(rows, cols, entries)
    }

    /// Canonical text form; `parse_text(m.to_text()) == m`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Matrix> {
        Matrix::parse_text(s)
    }
}
