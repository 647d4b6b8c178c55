//! Numerical thresholds shared across the crate.
//!
//! The exact-arithmetic statements this library checks only hold up to
//! double-precision noise, so every comparison goes through one of the
//! constants below. Report-level tolerances that a caller may override live
//! in [`CertTolerances`].

use serde::{Deserialize, Serialize};

/// Relative asymmetry accepted when a matrix is declared Hermitian.
pub const HERMIT_TOL: f64 = 1e-10;

/// Relative reconstruction error accepted for a cached eigendecomposition.
pub const RECON_TOL: f64 = 1e-10;

/// Relative eigenvalue floor for positive definiteness:
/// `min eig > PD_FLOOR * max(1, max eig)`.
pub const PD_FLOOR: f64 = 1e-12;

/// Trace deviation accepted when building a state before renormalizing.
pub const STATE_TRACE_TOL: f64 = 1e-12;

/// Trace-preservation tolerance for Kraus lists.
pub const CHANNEL_TP_TOL: f64 = 1e-10;

/// Most negative Choi eigenvalue still accepted as completely positive.
pub const CHANNEL_CP_TOL: f64 = 1e-10;

/// Unitarity tolerance for dilations.
pub const UNITARY_TOL: f64 = 1e-10;

/// Relative eigenvalue cut below which a PSD matrix is treated as rank deficient.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Absolute snap distance for parameter-region edges.
pub const REGION_EDGE_TOL: f64 = 1e-12;

/// Maximum Jacobi sweeps before the eigensolver gives up.
pub const EIGEN_MAX_SWEEPS: usize = 100;

/// Maximum twirl dimension accepted by the proof-artifact builder.
pub const MAX_TWIRL_DIM: usize = 12;

/// Tolerances used when turning residuals into verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertTolerances {
    /// Relative Frobenius tolerance for the matrix identities of a certificate.
    pub cert_tol: f64,
    /// DPI equality is declared when `|gap| <= dpi_eq_tol * (1 + |D(rho||sigma)|)`.
    pub dpi_eq_tol: f64,
    /// Most negative DPI gap still counted as monotone.
    pub dpi_slack: f64,
}

impl Default for CertTolerances {
    fn default() -> Self {
        Self {
            cert_tol: 1e-7,
            dpi_eq_tol: 1e-8,
            dpi_slack: 1e-9,
        }
    }
}
