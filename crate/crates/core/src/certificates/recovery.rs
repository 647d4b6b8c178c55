use serde::{Deserialize, Serialize};

use crate::channels::{QuantumChannel, QuantumState};
use crate::entropies::ParamPoint;
use crate::error::{Error, Result};
use crate::linalg::{relative_distance, PositiveDefiniteMatrix};

/// Tolerance for validating the `(2,2)` recovery map as a channel.
const RECOVERY_CHANNEL_TOL: f64 = 1e-9;

/// `R(ω) = σ^{1/2} E†(E(σ)^{−1/2} ω E(σ)^{−1/2}) σ^{1/2}` in Kraus form,
/// `R_k = σ^{1/2} E_k* E(σ)^{−1/2}`.
pub fn recovery_2_2(sigma: &QuantumState, channel: &QuantumChannel) -> Result<QuantumChannel> {
    if sigma.dim() != channel.dim_in() {
        return Err(Error::dims("σ does not match the channel input"));
    }
    let es = channel.apply_state(sigma)?;
    let es_inv_sqrt = es.power(-0.5)?;
    let s_sqrt = sigma.power(0.5)?;
    let kraus = channel
        .kraus()
        .iter()
        .map(|k| &(s_sqrt.matrix() * &k.adjoint()) * es_inv_sqrt.matrix())
        .collect();
    QuantumChannel::with_tolerance(kraus, RECOVERY_CHANNEL_TOL)
}

/// Output of the general recovery map on one input.
#[derive(Debug, Clone)]
pub struct RecoveryOutcome {
    pub result: PositiveDefiniteMatrix,
    /// `Tr R(ω)`; not asserted to be 1.
    pub trace: f64,
    /// Relative residual of substituting `R(ω)` back into the defining equation.
    pub back_substitution: f64,
}

/// Summary of a recovery check, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoverySummary {
    pub trace: f64,
    pub back_substitution: f64,
    /// `‖R(E(σ)) − σ‖_F / ‖σ‖_F`.
    pub sigma_recovery: f64,
    /// `‖R(E(ρ)) − ρ‖_F / ‖ρ‖_F`.
    pub rho_recovery: f64,
}

/// Right-hand side `E†[E(σ)^{q/2}(E(σ)^{q/2} ω^p E(σ)^{q/2})^{−q/(p+q)} E(σ)^{q/2}]`
/// of the defining equation.
fn recovery_target(
    pt: &ParamPoint,
    es: &PositiveDefiniteMatrix,
    channel: &QuantumChannel,
    omega: &PositiveDefiniteMatrix,
) -> Result<PositiveDefiniteMatrix> {
    let esq = es.power(pt.q / 2.0)?;
    let inner = esq
        .sandwich(&omega.power(pt.p)?)
        .map_err(|e| e.at_step("E(σ)^{q/2} ω^p E(σ)^{q/2}"))?;
    let mid = esq.sandwich(&inner.power(-pt.q / (pt.p + pt.q))?)?;
    let m = channel.adjoint().apply(mid.herm())?;
    PositiveDefiniteMatrix::new(m).map_err(|e| e.at_step("E†[…]"))
}

/// Left-hand side `σ^{q/2}(σ^{q/2} R^p σ^{q/2})^{−q/(p+q)} σ^{q/2}`.
fn recovery_lhs(
    pt: &ParamPoint,
    sigma: &PositiveDefiniteMatrix,
    r: &PositiveDefiniteMatrix,
) -> Result<PositiveDefiniteMatrix> {
    let sq = sigma.power(pt.q / 2.0)?;
    let inner = sq.sandwich(&r.power(pt.p)?)?;
    sq.sandwich(&inner.power(-pt.q / (pt.p + pt.q))?)
}

/// Solves the defining equation of the α-z recovery map in closed form:
/// with `M` the right-hand side,
/// `R(ω) = [σ^{−q/2}(σ^{−q/2} M σ^{−q/2})^{−(p+q)/q} σ^{−q/2}]^{1/p}`.
pub fn recovery_general(
    pt: &ParamPoint,
    sigma: &QuantumState,
    channel: &QuantumChannel,
    omega: &PositiveDefiniteMatrix,
) -> Result<RecoveryOutcome> {
    if sigma.dim() != channel.dim_in() || omega.dim() != channel.dim_out() {
        return Err(Error::dims("recovery map dimensions"));
    }
    if pt.q == 0.0 {
        return Err(Error::params("q = 0"));
    }
    let es = channel.apply_state(sigma)?;
    let m = recovery_target(pt, es.pd(), channel, omega)?;
    let s_neg = sigma.power(-pt.q / 2.0)?;
    let inner = s_neg.sandwich(&m).map_err(|e| e.at_step("σ^{-q/2} M σ^{-q/2}"))?;
    let rp = s_neg
        .sandwich(&inner.power(-(pt.p + pt.q) / pt.q)?)
        .map_err(|e| e.at_step("R^p"))?;
    let result = rp.power(1.0 / pt.p).map_err(|e| e.at_step("R"))?;
    let lhs = recovery_lhs(pt, sigma.pd(), &result)?;
    let back_substitution = relative_distance(lhs.matrix(), m.matrix())?;
    Ok(RecoveryOutcome {
        trace: result.trace(),
        result,
        back_substitution,
    })
}

/// Runs the general recovery map on `E(σ)` and `E(ρ)`.
pub fn recovery_summary(
    pt: &ParamPoint,
    rho: &QuantumState,
    sigma: &QuantumState,
    channel: &QuantumChannel,
) -> Result<RecoverySummary> {
    let es = channel.apply_state(sigma)?;
    let er = channel.apply_state(rho)?;
    let rs = recovery_general(pt, sigma, channel, es.pd())?;
    let rr = recovery_general(pt, sigma, channel, er.pd())?;
    Ok(RecoverySummary {
        trace: rr.trace,
        back_substitution: rs.back_substitution.max(rr.back_substitution),
        sigma_recovery: relative_distance(rs.result.matrix(), sigma.matrix())?,
        rho_recovery: relative_distance(rr.result.matrix(), rho.matrix())?,
    })
}
