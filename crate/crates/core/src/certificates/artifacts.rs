use serde::{Deserialize, Serialize};

use crate::channels::{twirled_decomposition, TwirledDecomposition};
use crate::error::Result;
use crate::linalg::{kron, relative_distance, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix};
use crate::tolerances::CertTolerances;

use super::conditions::{prepare, weighted_mean_term, Applicability, EqualityTriple, Residual};

/// Operators on `H ⊗ H' ⊗ K` built from a dilation of the channel and the
/// Heisenberg–Weyl group of `H ⊗ H'`:
///
/// - `H_0 = 1 ⊗ y`, `H_j = (u_j ⊗ 1) U(x ⊗ 1)U* (u_j* ⊗ 1)`
/// - `K_0 = (1/d) ⊗ (y^{1/2}E(ρ)^p y^{1/2})^{1/p}`, `K_j = (H_0^{1/2} V_j^p H_0^{1/2})^{1/p}`
/// - `L_0 = (1/d) ⊗ (y^{−1/2}E(σ)^q y^{−1/2})^{1/q}`, `L_j = (H_0^{−1/2} W_j^q H_0^{−1/2})^{1/q}`
///
/// `V_j` and `W_j` are rank deficient, so their powers and the outer powers of
/// `K_j`, `L_j` are taken on the support.
#[derive(Debug, Clone)]
pub struct ProofArtifacts {
    pub d: usize,
    pub h0: ComplexMatrix,
    pub h: Vec<ComplexMatrix>,
    pub k0: ComplexMatrix,
    pub l0: ComplexMatrix,
    pub k: Vec<ComplexMatrix>,
    pub l: Vec<ComplexMatrix>,
    /// Support projections `P_j = (u_j ⊗ 1) U(1 ⊗ δ)U* (u_j* ⊗ 1)` of `V_j`, `W_j`.
    pub supports: Vec<ComplexMatrix>,
    pub decomposition: TwirledDecomposition,
    pub applicability: Applicability,
}

/// Residuals of the three claims, plus diagnostics of the twirled
/// decomposition they rest on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaimsReport {
    pub d: usize,
    /// Worst `j` of `‖P_j (H_0 − H_j) P_j‖_F`.
    pub h_claim: Residual,
    /// Worst relative `‖H_0 − H_j‖_F` on the whole space. Off the support of
    /// `V_j` this depends on how the dilation unitary was completed, so it
    /// carries no verdict.
    pub h_full_space: f64,
    /// Worst `‖P_j H_0 (1 − P_j)‖_F / ‖H_0‖_F`.
    pub off_support_coupling: f64,
    /// `K_0` against the mean of `K_j`.
    pub k_claim: Residual,
    pub k_claim_applies: bool,
    /// `L_0` against the mean of `L_j`.
    pub l_claim: Residual,
    pub l_claim_applies: bool,
    pub v_average_residual: f64,
    pub w_average_residual: f64,
    pub dilation_unitarity: f64,
}

impl ClaimsReport {
    pub fn all_applicable_hold(&self) -> bool {
        self.h_claim.verdict
            && (!self.k_claim_applies || self.k_claim.verdict)
            && (!self.l_claim_applies || self.l_claim.verdict)
    }
}

fn support_term(outer: &ComplexMatrix, inner: &HermitianMatrix, e: f64) -> Result<ComplexMatrix> {
    let inner_pow = inner.support_power(e)?;
    let sandwiched = HermitianMatrix::from_hermitian_part(&outer.sandwich(inner_pow.matrix())?);
    Ok(sandwiched.support_power(1.0 / e)?.into_matrix())
}

fn mean(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let n = ops[0].rows();
    ops.iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, o| &acc + o)
        .scale(1.0 / ops.len() as f64)
}

/// Builds every operator of the twirled argument for `t`. Refuses group
/// dimensions above the twirl limit.
pub fn proof_artifacts(t: &EqualityTriple) -> Result<ProofArtifacts> {
    let pt = &t.pt;
    let prep = prepare(t)?;
    let dec = twirled_decomposition(&t.channel, &t.rho, &t.sigma)?;
    let d = dec.d;
    let dil = &dec.dilation;

    let id_d = ComplexMatrix::identity(d);
    let h0_pd = PositiveDefiniteMatrix::from_matrix(kron(&id_d, prep.y.matrix()))?;
    let h0_sqrt = h0_pd.power(0.5)?.into_matrix();
    let h0_inv_sqrt = h0_pd.power(-0.5)?.into_matrix();

    let base_h = dil.lift_operator(prep.x.matrix())?;
    let base_p = dil.lift(&ComplexMatrix::identity(t.channel.dim_in()))?;

    let mut h = Vec::with_capacity(d * d);
    let mut supports = Vec::with_capacity(d * d);
    let mut k = Vec::with_capacity(d * d);
    let mut l = Vec::with_capacity(d * d);
    for (j, r) in dec.rotations.iter().enumerate() {
        h.push(r.sandwich(&base_h)?);
        supports.push(r.sandwich(&base_p)?);
        k.push(support_term(&h0_sqrt, &dec.v[j], pt.p)?);
        l.push(support_term(&h0_inv_sqrt, &dec.w[j], pt.q)?);
    }

    let inv_d = id_d.scale(1.0 / d as f64);
    let k0 = kron(&inv_d, weighted_mean_term(&prep.y, &prep.rho_out, 0.5, pt.p)?.matrix());
    let l0 = kron(
        &inv_d,
        weighted_mean_term(&prep.y, &prep.sigma_out, -0.5, pt.q)?.matrix(),
    );

    Ok(ProofArtifacts {
        d,
        h0: h0_pd.into_matrix(),
        h,
        k0,
        l0,
        k,
        l,
        supports,
        decomposition: dec,
        applicability: Applicability::at(pt),
    })
}

impl ProofArtifacts {
    /// Evaluates the three claims at `tol.cert_tol`.
    pub fn claims(&self, t: &EqualityTriple, tol: &CertTolerances) -> Result<ClaimsReport> {
        let n = self.h0.rows();
        let id = ComplexMatrix::identity(n);
        let h0_norm = self.h0.frobenius_norm();
        let mut h_claim = Residual::from_parts(0.0, 0.0, tol.cert_tol);
        let mut h_full_space: f64 = 0.0;
        let mut off_support_coupling: f64 = 0.0;
        for (hj, pj) in self.h.iter().zip(&self.supports) {
            let lhs = &(pj * &self.h0) * pj;
            let rhs = &(pj * hj) * pj;
            let res = Residual::between(&lhs, &rhs, tol.cert_tol)?;
            if res.rel >= h_claim.rel {
                h_claim = res;
            }
            h_full_space = h_full_space.max(relative_distance(&self.h0, hj)?);
            let coupling = &(pj * &self.h0) * &(&id - pj);
            off_support_coupling = off_support_coupling.max(coupling.frobenius_norm() / h0_norm);
        }
        let (v_avg, w_avg) = self.decomposition.averaging_residuals(&t.channel, &t.rho, &t.sigma)?;
        Ok(ClaimsReport {
            d: self.d,
            h_claim,
            h_full_space,
            off_support_coupling,
            k_claim: Residual::between(&self.k0, &mean(&self.k), tol.cert_tol)?,
            k_claim_applies: self.applicability.rho_condition_necessary,
            l_claim: Residual::between(&self.l0, &mean(&self.l), tol.cert_tol)?,
            l_claim_applies: self.applicability.sigma_condition_necessary,
            v_average_residual: v_avg,
            w_average_residual: w_avg,
            dilation_unitarity: self.decomposition.dilation.unitarity_defect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        identity_channel, make_channel, partial_trace_channel, random_state, ChannelSpec, QuantumState,
    };
    use crate::entropies::ParamPoint;

    fn claims_for(t: &EqualityTriple) -> ClaimsReport {
        proof_artifacts(t)
            .unwrap()
            .claims(t, &CertTolerances::default())
            .unwrap()
    }

    #[test]
    fn identity_channel_claims() {
        let rho = random_state(2, 1).unwrap();
        let sigma = random_state(2, 2).unwrap();
        let t = EqualityTriple::new(
            rho,
            sigma,
            identity_channel(2).unwrap(),
            ParamPoint::new(1.5, 1.0).unwrap(),
        )
        .unwrap();
        let c = claims_for(&t);
        assert!(
            c.h_claim.rel < 1e-9 && c.k_claim.rel < 1e-9 && c.l_claim.rel < 1e-9,
            "{c:?}"
        );
    }

    #[test]
    fn unitary_channel_claims() {
        let rho = random_state(2, 3).unwrap();
        let sigma = random_state(2, 4).unwrap();
        let e = make_channel(&ChannelSpec::RandomUnitary { dim: 2, seed: 5 }).unwrap();
        let t = EqualityTriple::new(rho, sigma, e, ParamPoint::new(1.5, 1.0).unwrap()).unwrap();
        let c = claims_for(&t);
        assert!(c.all_applicable_hold(), "{c:?}");
        assert!(c.h_claim.rel < 1e-7 && c.k_claim.rel < 1e-7 && c.l_claim.rel < 1e-7);
    }

    #[test]
    fn entangled_partial_trace_breaks_h_claim() {
        let rho = random_state(4, 21).unwrap();
        let sa = random_state(2, 22).unwrap();
        let sb = random_state(2, 23).unwrap();
        let sigma = QuantumState::new(kron(sa.matrix(), sb.matrix())).unwrap();
        let e = partial_trace_channel(&[2, 2], &[1]).unwrap();
        let t = EqualityTriple::new(rho, sigma, e, ParamPoint::new(1.5, 1.0).unwrap()).unwrap();
        let c = claims_for(&t);
        assert!(!c.h_claim.verdict);
    }
}
