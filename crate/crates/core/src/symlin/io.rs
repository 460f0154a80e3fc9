//! Matrix file formats.
//!
//! * CSV: full square matrix, one row per line, comma separated. Blank lines
//!   and lines starting with `#` are ignored.
//! * JSON: `{"dim": n, "upper": [a00, a01, ..., a0n, a11, ..., ann]}`, the
//!   upper triangle in row-major order.

use super::SymmetricMatrix;
use crate::error::{Error, Result};

pub(crate) fn parse_csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(lineno, line)| {
            line.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: `{}`: {e}", lineno + 1, tok.trim())))
                })
                .collect()
        })
        .collect()
}

pub(crate) fn rows_to_csv(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

impl SymmetricMatrix {
    pub fn from_csv(text: &str) -> Result<Self> {
        Self::from_rows(&parse_csv_rows(text)?)
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.to_rows())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let a = SymmetricMatrix::from_fn(3, |i, j| 0.1 * (i + j) as f64 - 0.35).unwrap();
        let b = SymmetricMatrix::from_csv(&a.to_csv()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_layout() {
        let a = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        assert_eq!(a.to_json(), r#"{"dim":2,"upper":[1.0,2.0,3.0]}"#);
        assert_eq!(SymmetricMatrix::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn json_wrong_length() {
        assert!(SymmetricMatrix::from_json(r#"{"dim":2,"upper":[1.0,2.0]}"#).is_err());
    }

    #[test]
    fn csv_bad_token() {
        assert!(matches!(SymmetricMatrix::from_csv("1,x\n0,1\n"), Err(Error::Parse(_))));
    }
}
