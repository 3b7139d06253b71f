//! Column selectors.
//!
//! A selector is an optional `col:` prefix followed by comma-separated items.
//! An item is a column name, a 1-based position `#3`, or an inclusive range
//! between two of those (`f1..f10`, `#2..#5`). Ranges follow header order.

use crate::dataset::Dataset;
use crate::error::{CliError, Result};

/// Resolves `selector` to column indices in the order given.
pub fn resolve(selector: &str, data: &Dataset) -> Result<Vec<usize>> {
    let body = selector.strip_prefix("col:").unwrap_or(selector);
    let mut out = Vec::new();
    for item in body.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(CliError::Selection(format!(
                "empty item in selector '{selector}'"
            )));
        }
        let range = match data.names.iter().position(|n| n == item) {
            Some(j) => j..=j,
            None => match item.split_once("..") {
                Some((lo, hi)) => {
                    let (lo, hi) = (column(lo.trim(), data)?, column(hi.trim(), data)?);
                    if lo > hi {
                        return Err(CliError::Selection(format!(
                            "range '{item}' runs backwards"
                        )));
                    }
                    lo..=hi
                }
                None => {
                    let j = column(item, data)?;
                    j..=j
                }
            },
        };
        for j in range {
            if out.contains(&j) {
                return Err(CliError::Selection(format!(
                    "column '{}' selected twice in '{selector}'",
                    data.names[j]
                )));
            }
            out.push(j);
        }
    }
    Ok(out)
}

fn column(token: &str, data: &Dataset) -> Result<usize> {
    if let Some(pos) = token.strip_prefix('#') {
        let p: usize = pos
            .parse()
            .map_err(|_| CliError::Selection(format!("bad column position '{token}'")))?;
        if p == 0 || p > data.width() {
            return Err(CliError::Selection(format!(
                "column position {p} out of range 1..={}",
                data.width()
            )));
        }
        return Ok(p - 1);
    }
    data.names
        .iter()
        .position(|n| n == token)
        .ok_or_else(|| CliError::Selection(format!("no column named '{token}'")))
}
