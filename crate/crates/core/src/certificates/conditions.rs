use serde::{Deserialize, Serialize};

use crate::channels::{QuantumChannel, QuantumState};
use crate::entropies::{d_alpha_z, region_check, ParamPoint, RegionVerdict};
use crate::error::{Error, Result};
use crate::linalg::{relative_distance, ComplexMatrix, PositiveDefiniteMatrix};
use crate::tolerances::CertTolerances;

use super::artifacts::ClaimsReport;
use super::xy::{consistency_sides, x_operator, x_operator_rho_side};

const EXPONENT_EDGE: f64 = 1e-12;

/// States, channel and parameter point whose DPI equality is examined.
#[derive(Debug, Clone)]
pub struct EqualityTriple {
    pub rho: QuantumState,
    pub sigma: QuantumState,
    pub channel: QuantumChannel,
    pub pt: ParamPoint,
}

impl EqualityTriple {
    /// Checks dimensions and that `(α, z)` lies in the monotonicity region.
    pub fn new(rho: QuantumState, sigma: QuantumState, channel: QuantumChannel, pt: ParamPoint) -> Result<Self> {
        if rho.dim() != sigma.dim() || rho.dim() != channel.dim_in() {
            return Err(Error::dims(format!(
                "states of dimension {} and {} for a channel on dimension {}",
                rho.dim(),
                sigma.dim(),
                channel.dim_in()
            )));
        }
        if !region_check(&pt).valid {
            return Err(Error::params(format!(
                "(α, z) = ({}, {}) is outside the monotonicity region",
                pt.alpha, pt.z
            )));
        }
        Ok(Self {
            rho,
            sigma,
            channel,
            pt,
        })
    }
}

/// Frobenius residual `‖lhs − rhs‖_F` with its scale `max(‖lhs‖_F, ‖rhs‖_F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
    pub rel: f64,
    /// `abs ≤ tol · scale`.
    pub verdict: bool,
}

impl Residual {
    pub fn between(lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol: f64) -> Result<Self> {
        let abs = lhs.distance(rhs)?;
        let scale = lhs.frobenius_norm().max(rhs.frobenius_norm());
        Ok(Self::from_parts(abs, scale, tol))
    }

    pub fn from_parts(abs: f64, scale: f64, tol: f64) -> Self {
        let rel = if scale > 0.0 { abs / scale } else { abs };
        Self {
            abs,
            scale,
            rel,
            verdict: abs <= tol * scale,
        }
    }
}

/// `D(ρ‖σ) − D(E(ρ)‖E(σ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpiGap {
    pub d_input: f64,
    pub d_output: f64,
    pub gap: f64,
    /// `|gap| ≤ dpi_eq_tol · (1 + |D(ρ‖σ)|)`.
    pub equality: bool,
    /// `gap ≥ −dpi_slack`.
    pub monotone: bool,
}

impl DpiGap {
    pub fn new(d_input: f64, d_output: f64, tol: &CertTolerances) -> Self {
        let gap = d_input - d_output;
        Self {
            d_input,
            d_output,
            gap,
            equality: gap.abs() <= tol.dpi_eq_tol * (1.0 + d_input.abs()),
            monotone: gap >= -tol.dpi_slack,
        }
    }
}

/// Which implications between the four conditions are guaranteed at this
/// parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    /// `p ≠ 1`: DPI equality forces the ρ condition.
    pub rho_condition_necessary: bool,
    /// `q ≠ ±1`: DPI equality forces the σ condition.
    pub sigma_condition_necessary: bool,
    /// `p = 1`: the adjoint condition forces DPI equality.
    pub adjoint_condition_sufficient: bool,
}

impl Applicability {
    pub fn at(pt: &ParamPoint) -> Self {
        let p_is_one = (pt.p - 1.0).abs() <= EXPONENT_EDGE;
        let q_is_unit = (pt.q.abs() - 1.0).abs() <= EXPONENT_EDGE;
        Self {
            rho_condition_necessary: !p_is_one,
            sigma_condition_necessary: !q_is_unit,
            adjoint_condition_sufficient: p_is_one,
        }
    }
}

/// A broken implication between condition verdicts. These are guaranteed in
/// exact arithmetic, so any entry signals a numerical or implementation defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremViolation {
    pub premise: String,
    pub conclusion: String,
}

/// Residuals and verdicts of the four equality conditions for one triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub alpha: f64,
    pub z: f64,
    pub p: f64,
    pub q: f64,
    pub region: RegionVerdict,
    pub dim_in: usize,
    pub dim_out: usize,
    pub tolerances: CertTolerances,
    /// Condition (1): DPI equality.
    pub dpi: DpiGap,
    /// Condition (2): `‖x − E†(y)‖_F`.
    pub adjoint_residual: Residual,
    /// Condition (3): `E[(x^{1/2}ρ^p x^{1/2})^{1/p}]` against `(y^{1/2}E(ρ)^p y^{1/2})^{1/p}`.
    pub rho_residual: Residual,
    /// Condition (4): `E[(x^{−1/2}σ^q x^{−1/2})^{1/q}]` against `(y^{−1/2}E(σ)^q y^{−1/2})^{1/q}`.
    pub sigma_residual: Residual,
    /// Relative gap between the two expressions for `x`, and for `y`.
    pub x_dual_form: f64,
    pub y_dual_form: f64,
    /// Largest relative residual of `(ρ^{p/2}xρ^{p/2})^{1/p} = (ρ^{p/2}σ^qρ^{p/2})^{1/(p+q)}`
    /// and its output-side counterpart.
    pub consistency: f64,
    pub applicability: Applicability,
    pub claims: Option<ClaimsReport>,
    pub violations: Vec<TheoremViolation>,
}

impl CertificateReport {
    pub fn has_violations(&self) -> bool {
        !self.violations.is_empty()
    }

    /// All conditions that are asserted at this point hold.
    pub fn all_conditions_hold(&self) -> bool {
        self.dpi.equality
            && self.adjoint_residual.verdict
            && (!self.applicability.rho_condition_necessary || self.rho_residual.verdict)
            && (!self.applicability.sigma_condition_necessary || self.sigma_residual.verdict)
    }
}

/// Images and `x`, `y` shared by the condition checks and the proof artifacts.
pub(crate) struct Prepared {
    pub rho_out: PositiveDefiniteMatrix,
    pub sigma_out: PositiveDefiniteMatrix,
    pub x: PositiveDefiniteMatrix,
    pub y: PositiveDefiniteMatrix,
}

pub(crate) fn prepare(t: &EqualityTriple) -> Result<Prepared> {
    let rho_out = t.channel.apply_state(&t.rho)?.pd().clone();
    let sigma_out = t.channel.apply_state(&t.sigma)?.pd().clone();
    let x = x_operator(&t.pt, t.rho.pd(), t.sigma.pd())?;
    let y = x_operator(&t.pt, &rho_out, &sigma_out)?;
    Ok(Prepared {
        rho_out,
        sigma_out,
        x,
        y,
    })
}

/// `(c^{1/2} a^p c^{1/2})^{1/p}` for `s = 1/2`, or `(c^{−1/2} a^q c^{−1/2})^{1/q}`
/// for `s = −1/2`.
pub(crate) fn weighted_mean_term(
    c: &PositiveDefiniteMatrix,
    a: &PositiveDefiniteMatrix,
    s: f64,
    e: f64,
) -> Result<PositiveDefiniteMatrix> {
    c.power(s)?.sandwich(&a.power(e)?)?.power(1.0 / e)
}

/// Evaluates the four equality conditions and cross-checks their
/// implications.
pub fn check_conditions(t: &EqualityTriple, tol: &CertTolerances) -> Result<CertificateReport> {
    let pt = &t.pt;
    let prep = prepare(t)?;
    let d_in = d_alpha_z(pt, &t.rho, &t.sigma)?;
    let d_out = psi_entropy(pt, &prep.rho_out, &prep.sigma_out)?;
    let dpi = DpiGap::new(d_in, d_out, tol);

    let ey = t.channel.adjoint().apply_matrix(prep.y.matrix())?;
    let adjoint_residual = Residual::between(prep.x.matrix(), &ey, tol.cert_tol)?;

    let rho_in =
        weighted_mean_term(&prep.x, t.rho.pd(), 0.5, pt.p).map_err(|e| e.at_step("(x^{1/2}ρ^p x^{1/2})^{1/p}"))?;
    let rho_lhs = t.channel.apply_matrix(rho_in.matrix())?;
    let rho_rhs = weighted_mean_term(&prep.y, &prep.rho_out, 0.5, pt.p)
        .map_err(|e| e.at_step("(y^{1/2}E(ρ)^p y^{1/2})^{1/p}"))?;
    let rho_residual = Residual::between(&rho_lhs, rho_rhs.matrix(), tol.cert_tol)?;

    let sigma_in =
        weighted_mean_term(&prep.x, t.sigma.pd(), -0.5, pt.q).map_err(|e| e.at_step("(x^{-1/2}σ^q x^{-1/2})^{1/q}"))?;
    let sigma_lhs = t.channel.apply_matrix(sigma_in.matrix())?;
    let sigma_rhs = weighted_mean_term(&prep.y, &prep.sigma_out, -0.5, pt.q)
        .map_err(|e| e.at_step("(y^{-1/2}E(σ)^q y^{-1/2})^{1/q}"))?;
    let sigma_residual = Residual::between(&sigma_lhs, sigma_rhs.matrix(), tol.cert_tol)?;

    let x_dual_form = relative_distance(
        prep.x.matrix(),
        x_operator_rho_side(pt, t.rho.pd(), t.sigma.pd())?.matrix(),
    )?;
    let y_dual_form = relative_distance(
        prep.y.matrix(),
        x_operator_rho_side(pt, &prep.rho_out, &prep.sigma_out)?.matrix(),
    )?;
    let (cl, cr) = consistency_sides(pt, t.rho.pd(), t.sigma.pd(), &prep.x)?;
    let (ol, or) = consistency_sides(pt, &prep.rho_out, &prep.sigma_out, &prep.y)?;
    let consistency = relative_distance(&cl, &cr)?.max(relative_distance(&ol, &or)?);

    let applicability = Applicability::at(pt);
    let mut report = CertificateReport {
        alpha: pt.alpha,
        z: pt.z,
        p: pt.p,
        q: pt.q,
        region: region_check(pt),
        dim_in: t.channel.dim_in(),
        dim_out: t.channel.dim_out(),
        tolerances: *tol,
        dpi,
        adjoint_residual,
        rho_residual,
        sigma_residual,
        x_dual_form,
        y_dual_form,
        consistency,
        applicability,
        claims: None,
        violations: Vec::new(),
    };
    report.violations = implication_violations(&report);
    Ok(report)
}

fn psi_entropy(pt: &ParamPoint, a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<f64> {
    Ok(crate::entropies::psi(pt, a, b)?.ln() / (pt.alpha - 1.0))
}

/// Checks the verdicts against the implication lattice between the four
/// conditions.
pub fn implication_violations(r: &CertificateReport) -> Vec<TheoremViolation> {
    let mut out = Vec::new();
    let mut check = |premise: bool, conclusion: bool, p: &str, c: &str| {
        if premise && !conclusion {
            out.push(TheoremViolation {
                premise: p.into(),
                conclusion: c.into(),
            });
        }
    };
    let eq = r.dpi.equality;
    let (adj, rho, sig) = (
        r.adjoint_residual.verdict,
        r.rho_residual.verdict,
        r.sigma_residual.verdict,
    );
    check(rho, eq, "rho_condition", "dpi_equality");
    check(sig, eq, "sigma_condition", "dpi_equality");
    check(eq, adj, "dpi_equality", "adjoint_condition");
    if r.applicability.adjoint_condition_sufficient {
        check(adj, eq, "adjoint_condition", "dpi_equality");
    }
    if r.applicability.rho_condition_necessary {
        check(eq, rho, "dpi_equality", "rho_condition");
    }
    if r.applicability.sigma_condition_necessary {
        check(eq, sig, "dpi_equality", "sigma_condition");
    }
    if !r.dpi.monotone {
        out.push(TheoremViolation {
            premise: "region".into(),
            conclusion: "dpi_monotone".into(),
        });
    }
    out
}
