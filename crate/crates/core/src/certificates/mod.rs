//! The operators `x`, `y`, the four DPI equality conditions, recovery maps
//! and the twirled proof artifacts.

mod artifacts;
mod conditions;
mod recovery;
mod xy;

pub use artifacts::{proof_artifacts, ClaimsReport, ProofArtifacts};
pub use conditions::{
    check_conditions, implication_violations, Applicability, CertificateReport, DpiGap, EqualityTriple, Residual,
    TheoremViolation,
};
pub use recovery::{recovery_2_2, recovery_general, recovery_summary, RecoveryOutcome, RecoverySummary};
pub use xy::{compute_x, compute_y, consistency_sides, x_dual_form_residual, x_operator, x_operator_rho_side};

use crate::error::Result;
use crate::tolerances::CertTolerances;

/// Condition report with the proof-artifact claims attached.
pub fn certify_with_claims(t: &EqualityTriple, tol: &CertTolerances) -> Result<CertificateReport> {
    let mut report = check_conditions(t, tol)?;
    let artifacts = proof_artifacts(t)?;
    report.claims = Some(artifacts.claims(t, tol)?);
    Ok(report)
}
