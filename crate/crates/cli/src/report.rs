//! Report envelope, tolerance overrides, error objects and output formatting.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use renyi_dpi::entropies::ParamPoint;
use renyi_dpi::tolerances::CertTolerances;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_NON_CONVERGENCE: u8 = 4;

const TOL_RANGE: (f64, f64) = (1e-14, 1e-2);

/// Tolerances in effect for a run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    #[serde(flatten)]
    pub cert: CertTolerances,
    pub grad_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cert: CertTolerances::default(),
            grad_tol: renyi_dpi::variational::OptimizeOptions::default().grad_tol,
        }
    }
}

impl Tolerances {
    /// Applies `name=value` overrides.
    pub fn with_overrides(overrides: &[String]) -> Result<Self, CliError> {
        let mut t = Self::default();
        for item in overrides {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::validation(format!("tolerance override `{item}` is not NAME=VALUE")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::validation(format!("tolerance `{name}` has non-numeric value `{value}`")))?;
            if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&value) {
                return Err(CliError::validation(format!(
                    "tolerance `{name}` = {value:e} is outside [{:e}, {:e}]",
                    TOL_RANGE.0, TOL_RANGE.1
                )));
            }
            let slot = match name.trim() {
                "cert_tol" => &mut t.cert.cert_tol,
                "dpi_eq_tol" => &mut t.cert.dpi_eq_tol,
                "dpi_slack" => &mut t.cert.dpi_slack,
                "grad_tol" => &mut t.grad_tol,
                other => return Err(CliError::validation(format!("unknown tolerance `{other}`"))),
            };
            *slot = value;
        }
        Ok(t)
    }
}

/// Failure carrying an exit code and a machine-readable kind.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
    pub details: Value,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind: "validation".into(),
            message: message.into(),
            details: Value::Null,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind: "io".into(),
            message: format!("{}: {err}", path.display()),
            details: Value::Null,
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        json!({
            "command": command,
            "version": renyi_dpi::VERSION,
            "error": {
                "kind": self.kind,
                "exit_code": self.code,
                "message": self.message,
                "details": self.details,
            }
        })
    }
}

impl From<renyi_dpi::Error> for CliError {
    fn from(e: renyi_dpi::Error) -> Self {
        use renyi_dpi::Error as E;
        let message = e.to_string();
        let (code, kind, details) = match e {
            E::NonConvergence {
                iterations,
                grad_norm,
                best_value,
            } => (
                EXIT_NON_CONVERGENCE,
                "non_convergence",
                json!({ "iterations": iterations, "grad_norm": grad_norm, "best_value": best_value }),
            ),
            E::EigenNonConvergence { sweeps, off_norm } => (
                EXIT_NON_CONVERGENCE,
                "eigen_non_convergence",
                json!({ "sweeps": sweeps, "off_norm": off_norm }),
            ),
            E::DimensionMismatch(_) => (EXIT_VALIDATION, "dimension_mismatch", Value::Null),
            E::NonFinite { row, col } => (EXIT_VALIDATION, "non_finite", json!({ "row": row, "col": col })),
            E::NotHermitian(asym) => (EXIT_VALIDATION, "not_hermitian", json!({ "asymmetry": asym })),
            E::NotPositiveDefinite { min_eig, max_eig, .. } => (
                EXIT_VALIDATION,
                "not_positive_definite",
                json!({ "min_eig": min_eig, "max_eig": max_eig }),
            ),
            E::Singular(ratio) => (EXIT_VALIDATION, "singular", json!({ "ratio": ratio })),
            E::InvalidParams(_) => (EXIT_VALIDATION, "invalid_params", Value::Null),
            E::InvalidState(_) => (EXIT_VALIDATION, "invalid_state", Value::Null),
            E::InvalidChannel(_) => (EXIT_VALIDATION, "invalid_channel", Value::Null),
            E::CompletionFailure(_) => (EXIT_VALIDATION, "completion_failure", Value::Null),
            E::ImageNotFaithful(_) => (EXIT_VALIDATION, "image_not_faithful", Value::Null),
            E::DegenerateCoefficients(den) => (EXIT_VALIDATION, "degenerate_coefficients", json!({ "den": den })),
            E::Codec(_) => (EXIT_VALIDATION, "codec", Value::Null),
        };
        Self {
            code,
            kind: kind.into(),
            message,
            details,
        }
    }
}

/// What a command hands back before the envelope is added.
pub struct Outcome {
    pub seeds: Value,
    pub point: Option<ParamPoint>,
    pub result: Value,
    /// A theorem-violation diagnostic fired.
    pub violation: bool,
}

/// Wraps a command result with version, tolerances, seeds, parameters,
/// region verdict and timestamp.
pub fn envelope(command: &str, tol: &Tolerances, outcome: &Outcome) -> Value {
    let (params, region) = match &outcome.point {
        Some(pt) => (json!(pt), json!(pt.region())),
        None => (Value::Null, Value::Null),
    };
    json!({
        "command": command,
        "version": renyi_dpi::VERSION,
        "timestamp": timestamp(),
        "tolerances": tol,
        "seeds": outcome.seeds,
        "params": params,
        "region": region,
        "violation": outcome.violation,
        "result": outcome.result,
    })
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Parses a matrix written by the library codec into a JSON value.
pub fn matrix_value(m: &renyi_dpi::linalg::ComplexMatrix) -> Value {
    serde_json::from_str(&renyi_dpi::linalg::matrix_to_json(m)).unwrap_or(Value::Null)
}

/// `key.path  value` lines derived from the JSON report.
pub fn to_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in rows {
        let _ = writeln!(out, "{k:<width$}  {val}");
    }
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, rows);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), item, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
