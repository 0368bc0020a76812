//! File formats for the command-line tools: vectors and matrices as either
//! CSV or JSON, detected by content.

use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// On-disk representation of a parsed file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

/// A flat vector of numbers plus the format it arrived in.
///
/// CSV vectors are one value per line, a single comma-separated line, or any
/// mix; JSON vectors are a flat array. Serialized numbers use the shortest
/// representation that parses back to the identical value, so a round trip
/// is lossless.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFile {
    pub values: Vec<f64>,
    pub format: FileFormat,
}

impl VectorFile {
    pub fn parse(text: &str) -> Result<Self> {
        if sniff_json(text) {
            let values: Vec<f64> = serde_json::from_str(text)
                .map_err(|e| Error::Invalid(format!("vector JSON: {e}")))?;
            Ok(Self {
                values,
                format: FileFormat::Json,
            })
        } else {
            let mut values = Vec::new();
            for token in csv_tokens(text) {
                values.push(parse_number(token)?);
            }
            Ok(Self {
                values,
                format: FileFormat::Csv,
            })
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn serialize(&self) -> String {
        match self.format {
            FileFormat::Json => {
                serde_json::to_string(&self.values).expect("vector serializes")
            }
            FileFormat::Csv => {
                let mut out = String::new();
                for v in &self.values {
                    out.push_str(&format!("{v}\n"));
                }
                out
            }
        }
    }
}

/// A rectangular matrix plus the format it arrived in.
///
/// CSV matrices are one row per line with comma-separated entries; JSON
/// matrices are an array of row arrays. All rows must share one length and
/// every entry must be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub values: Vec<f64>,
    pub format: FileFormat,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        let (row_lists, format) = if sniff_json(text) {
            let rows: Vec<Vec<f64>> = serde_json::from_str(text)
                .map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))?;
            (rows, FileFormat::Json)
        } else {
            let mut rows = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let mut row = Vec::new();
                for token in line.split(',') {
                    let token = token.trim();
                    if !token.is_empty() {
                        row.push(parse_number(token)?);
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
            (rows, FileFormat::Csv)
        };

        if row_lists.is_empty() {
            return Err(Error::Invalid("matrix file has no rows".into()));
        }
        let cols = row_lists[0].len();
        if cols == 0 {
            return Err(Error::Invalid("matrix rows are empty".into()));
        }
        if let Some(i) = row_lists.iter().position(|r| r.len() != cols) {
            return Err(Error::Invalid(format!(
                "matrix row {i} has {} entries, expected {cols}",
                row_lists[i].len()
            )));
        }
        let rows = row_lists.len();
        let values: Vec<f64> = row_lists.into_iter().flatten().collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "matrix entry at flat index {i} is not finite"
            )));
        }
        Ok(Self {
            rows,
            cols,
            values,
            format,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        Matrix::new(self.rows, self.cols, self.values.clone())
    }

    pub fn serialize(&self) -> String {
        let rows: Vec<&[f64]> = self.values.chunks(self.cols).collect();
        match self.format {
            FileFormat::Json => serde_json::to_string(&rows).expect("matrix serializes"),
            FileFormat::Csv => {
                let mut out = String::new();
                for row in rows {
                    let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// JSON payloads open with a bracket; anything else is treated as CSV.
fn sniff_json(text: &str) -> bool {
    text.trim_start().starts_with('[')
}

fn csv_tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .flat_map(|line| line.split(','))
        .map(str::trim)
        .filter(|t| !t.is_empty())
}

fn parse_number(token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::Invalid(format!("cannot parse {token:?} as a number")))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}
