pub mod certify;
pub mod entropy;
pub mod gen;
pub mod sweep;
pub mod variational;

use std::path::Path;

use renyi_dpi::channels::{QuantumChannel, QuantumState};
use renyi_dpi::linalg::matrix_from_json;

use crate::report::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_state(path: &Path) -> Result<QuantumState, CliError> {
    let m = matrix_from_json(&read_text(path)?)?;
    Ok(QuantumState::new(m)?)
}

pub fn read_channel(path: &Path) -> Result<QuantumChannel, CliError> {
    Ok(QuantumChannel::from_json(&read_text(path)?)?)
}

/// Parses `a,b,c` into a list, ignoring blanks.
pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::validation(format!("bad {what} `{s}`"))))
        .collect()
}
