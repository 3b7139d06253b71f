//! Delimited text input.

use std::io::Read;
use std::path::Path;

use csv::{ReaderBuilder, Trim};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// A rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub n: usize,
    /// SHA-256 of the raw input bytes, lowercase hex.
    pub sha256: String,
}

impl Dataset {
    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn width(&self) -> usize {
        self.names.len()
    }
}

/// Parses delimiter-separated text with a header row.
///
/// Every row must have one finite number per header field. All offending
/// lines are reported together.
pub fn parse_dataset<R: Read>(mut input: R, delimiter: u8) -> Result<Dataset> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|source| CliError::Io {
            path: "<stream>".into(),
            source,
        })?;
    parse_bytes(&bytes, delimiter)
}

/// Reads `path`, or standard input when `path` is `-`.
pub fn read_dataset(path: &Path, delimiter: u8) -> Result<Dataset> {
    if path.as_os_str() == "-" {
        return parse_dataset(std::io::stdin().lock(), delimiter);
    }
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_bytes(&bytes, delimiter)
}

fn parse_bytes(bytes: &[u8], delimiter: u8) -> Result<Dataset> {
    let sha256 = hex::encode(Sha256::digest(bytes));
    let mut reader = ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(bytes);

    let header = reader.headers().map_err(|e| csv_error(&e))?.clone();
    if header.is_empty() {
        return Err(CliError::EmptyDataset { rows: 0 });
    }
    let names: Vec<String> = header.iter().map(str::to_owned).collect();
    for (j, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(parse_error(
                1,
                format!("column {} has an empty name", j + 1),
            ));
        }
        if names[..j].contains(name) {
            return Err(parse_error(1, format!("duplicate column name '{name}'")));
        }
    }

    let width = names.len();
    let mut columns = vec![Vec::new(); width];
    let mut bad_lines = Vec::new();
    let mut first_problem = None;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        let problem = if record.len() != width {
            Some(format!("expected {width} fields, found {}", record.len()))
        } else {
            record
                .iter()
                .zip(&names)
                .find_map(|(cell, name)| match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => None,
                    _ => Some(format!("column '{name}': '{cell}' is not a finite number")),
                })
        };
        match problem {
            Some(p) => {
                first_problem.get_or_insert_with(|| format!("line {line}: {p}"));
                bad_lines.push(line);
            }
            None if bad_lines.is_empty() => {
                for (col, cell) in columns.iter_mut().zip(record.iter()) {
                    col.push(cell.parse().expect("checked above"));
                }
            }
            None => {}
        }
    }
    if let Some(first) = first_problem {
        let message = if bad_lines.len() == 1 {
            first
        } else {
            format!("{} malformed rows; first at {first}", bad_lines.len())
        };
        return Err(CliError::Parse {
            lines: bad_lines,
            message,
        });
    }

    let n = columns[0].len();
    if n < 2 {
        return Err(CliError::EmptyDataset { rows: n });
    }
    Ok(Dataset {
        names,
        columns,
        n,
        sha256,
    })
}

fn parse_error(line: u64, message: String) -> CliError {
    CliError::Parse {
        lines: vec![line],
        message: format!("line {line}: {message}"),
    }
}

fn csv_error(e: &csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    parse_error(line, e.to_string())
}
