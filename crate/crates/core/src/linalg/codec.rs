//! JSON matrix codec: `{"rows": n, "cols": m, "data": [[re, im], ...]}` row-major.
//!
//! The writer formats every number with 17 significant digits so that a
//! written matrix reads back bit-identical.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

/// Formats an `f64` as a JSON number with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a matrix to the codec's JSON text.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let entries: Vec<String> = m
        .data()
        .iter()
        .map(|z| format!("[{},{}]", format_f64(z.re), format_f64(z.im)))
        .collect();
    format!(
        "{{\"rows\":{},\"cols\":{},\"data\":[{}]}}",
        m.rows(),
        m.cols(),
        entries.join(",")
    )
}

/// Parses the codec's JSON text.
pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Codec(e.to_string()))?;
    matrix_from_value(&value)
}

pub fn matrix_from_value(value: &serde_json::Value) -> Result<ComplexMatrix> {
    let rec: MatrixRecord = serde_json::from_value(value.clone()).map_err(|e| Error::Codec(e.to_string()))?;
    let data = rec.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::new(rec.rows, rec.cols, data)
}
