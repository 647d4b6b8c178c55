use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{ginibre, seeded_rng};
use crate::entropies::{psi, ParamPoint};
use crate::error::{Error, Result};
use crate::linalg::{relative_distance, ComplexMatrix, PositiveDefiniteMatrix};

use super::problem::{Sense, TripleExponents, VariationalProblem};

/// Outcome of a randomized midpoint probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub trials: usize,
    pub violations: usize,
    /// Smallest observed margin; negative values beyond the slack are violations.
    pub worst_margin: f64,
    /// Whether the functional should be concave (`true`) or convex.
    pub concave: bool,
}

impl ConvexityReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// `Re Tr(K*A^pK B^{1−p})`.
pub fn lieb_functional(
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
    k: &ComplexMatrix,
    p: f64,
) -> Result<f64> {
    let left = a.power(p)?.congruence(&k.adjoint())?;
    Ok(left.matrix().trace_product(b.power(1.0 - p)?.matrix())?.re)
}

/// `Re Tr(M Z^e)` with `M = H^{1/2} C H^{1/2}`.
fn weighted_trace(
    h_half: &PositiveDefiniteMatrix,
    c: &PositiveDefiniteMatrix,
    z: &PositiveDefiniteMatrix,
    e: f64,
) -> Result<f64> {
    let m = h_half.sandwich(c)?;
    Ok(m.matrix().trace_product(z.power(e)?.matrix())?.re)
}

/// `g_H(A,B,K,L) = (1/(p+q))Tr(H^{1/2}A^pH^{1/2}K^{1−p}) − ((1−p)/(p+q))Tr K
///  + (1/(p+q))Tr(H^{−1/2}B^qH^{−1/2}L^{1−q}) − ((1−q)/(p+q))Tr L`.
pub fn g_h(h: &PositiveDefiniteMatrix, p: f64, q: f64, args: [&PositiveDefiniteMatrix; 4]) -> Result<f64> {
    let [a, b, k, l] = args;
    let s = p + q;
    let ta = weighted_trace(&h.power(0.5)?, &a.power(p)?, k, 1.0 - p)?;
    let tb = weighted_trace(&h.power(-0.5)?, &b.power(q)?, l, 1.0 - q)?;
    Ok((ta - (1.0 - p) * k.trace() + tb - (1.0 - q) * l.trace()) / s)
}

/// `h_H(A,B,K,L) = (1/(p+q))Tr(H^{1/2}A^pH^{1/2}K^{1−p}) + ((p−1)/(p+q))Tr K
///  − (1/(p+q))Tr(H^{1/2}B^{−q}H^{1/2}L^{1+q}) + ((1+q)/(p+q))Tr L`.
pub fn h_h(h: &PositiveDefiniteMatrix, p: f64, q: f64, args: [&PositiveDefiniteMatrix; 4]) -> Result<f64> {
    let [a, b, k, l] = args;
    let s = p + q;
    let hh = h.power(0.5)?;
    let ta = weighted_trace(&hh, &a.power(p)?, k, 1.0 - p)?;
    let tb = weighted_trace(&hh, &b.power(-q)?, l, 1.0 + q)?;
    Ok((ta + (p - 1.0) * k.trace() - tb + (1.0 + q) * l.trace()) / s)
}

fn random_pd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PositiveDefiniteMatrix> {
    let g = ginibre(dim, dim, rng);
    let m = &(&g * &g.adjoint()).scale(1.0 / dim as f64) + &ComplexMatrix::identity(dim).scale(0.05);
    PositiveDefiniteMatrix::from_hermitian_part(&m)
}

fn midpoint(a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
    PositiveDefiniteMatrix::from_hermitian_part(&(a.matrix() + b.matrix()).scale(0.5))
}

/// Runs `trials` midpoint tests of a functional of `n` positive-definite
/// arguments.
fn midpoint_probe(
    dim: usize,
    n: usize,
    trials: usize,
    seed: u64,
    concave: bool,
    f: impl Fn(&[PositiveDefiniteMatrix]) -> Result<f64>,
) -> Result<ConvexityReport> {
    let mut rng = seeded_rng(seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let first = (0..n).map(|_| random_pd(dim, &mut rng)).collect::<Result<Vec<_>>>()?;
        let second = (0..n).map(|_| random_pd(dim, &mut rng)).collect::<Result<Vec<_>>>()?;
        let mid = first
            .iter()
            .zip(&second)
            .map(|(x, y)| midpoint(x, y))
            .collect::<Result<Vec<_>>>()?;
        let avg = 0.5 * (f(&first)? + f(&second)?);
        let at_mid = f(&mid)?;
        let margin = if concave { at_mid - avg } else { avg - at_mid };
        worst = worst.min(margin);
        if margin < -1e-10 * avg.abs().max(1.0) {
            violations += 1;
        }
    }
    Ok(ConvexityReport {
        trials,
        violations,
        worst_margin: worst,
        concave,
    })
}

/// Midpoint probe of `(A,B) ↦ Tr(K*A^pKB^{1−p})`: concave for `0 < p ≤ 1`,
/// convex for `−1 ≤ p < 0`.
pub fn convexity_probe(p_exp: f64, k: &ComplexMatrix, trials: usize, seed: u64) -> Result<ConvexityReport> {
    let concave = match p_exp {
        p if p > 0.0 && p <= 1.0 => true,
        p if (-1.0..0.0).contains(&p) => false,
        p => return Err(Error::params(format!("p = {p} outside [-1, 0) ∪ (0, 1]"))),
    };
    if !k.is_square() {
        return Err(Error::dims("K must be square"));
    }
    midpoint_probe(k.rows(), 2, trials, seed, concave, |m| {
        lieb_functional(&m[0], &m[1], k, p_exp)
    })
}

/// Midpoint probe of joint concavity of `g_H` for `0 < p, q < 1` at a seeded
/// random `H`.
pub fn g_h_probe(p: f64, q: f64, dim: usize, trials: usize, seed: u64) -> Result<ConvexityReport> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::params(format!("g_H needs 0 < p, q < 1, got ({p}, {q})")));
    }
    let h = random_pd(dim, &mut seeded_rng(seed ^ 0x4a11))?;
    midpoint_probe(dim, 4, trials, seed, true, |m| {
        g_h(&h, p, q, [&m[0], &m[1], &m[2], &m[3]])
    })
}

/// Midpoint probe of joint convexity of `h_H` for `1 < p ≤ 2`, `−1 < q < 0`
/// at a seeded random `H`.
pub fn h_h_probe(p: f64, q: f64, dim: usize, trials: usize, seed: u64) -> Result<ConvexityReport> {
    if !(p > 1.0 && p <= 2.0 && q > -1.0 && q < 0.0) {
        return Err(Error::params(format!(
            "h_H needs 1 < p ≤ 2 and -1 < q < 0, got ({p}, {q})"
        )));
    }
    let h = random_pd(dim, &mut seeded_rng(seed ^ 0x4a11))?;
    midpoint_probe(dim, 4, trials, seed, false, |m| {
        h_h(&h, p, q, [&m[0], &m[1], &m[2], &m[3]])
    })
}

/// `Ψ_{p,q}(A,B)` next to the optimal value of the matching variational
/// problem with `X = A^{p/2}`, `Y = B^{q/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub sense: Sense,
    pub psi: f64,
    pub variational_value: f64,
    pub rel: f64,
    /// Relative distance between the closed-form optimizer and the `Ψ`-side
    /// formula `A^{−p/2}(A^{p/2}B^qA^{p/2})^{p/(p+q)}A^{−p/2}`.
    pub optimizer_rel: f64,
}

/// Evaluates `Ψ` through the variational formula: minimum with exponents
/// `(1/(p+q), 1/p, 1/q)` when `0 < p, q ≤ 1`, maximum with
/// `(1/p, 1/(p+q), −1/q)` when `1 ≤ p ≤ 2`, `−1 ≤ q < 0`.
pub fn psi_bridge(pt: &ParamPoint, a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<BridgeReport> {
    let (p, q) = (pt.p, pt.q);
    let s = p + q;
    let (exps, sense) = if p > 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0 {
        (TripleExponents::new(1.0 / s, 1.0 / p, 1.0 / q)?, Sense::Min)
    } else if (1.0..=2.0).contains(&p) && (-1.0..0.0).contains(&q) {
        (TripleExponents::new(1.0 / p, 1.0 / s, -1.0 / q)?, Sense::Max)
    } else {
        return Err(Error::params(format!("(p, q) = ({p}, {q}) has no variational form")));
    };
    let x = a.power(p / 2.0)?;
    let y = b.power(q / 2.0)?;
    let vp = VariationalProblem::new(exps, x.matrix().clone(), y.matrix().clone(), sense)?;
    let cf = vp.closed_form()?;
    let psi_value = psi(pt, a, b)?;
    let inner = b.power(q)?.congruence(x.matrix())?.power(p / s)?;
    let h_psi = inner.congruence(x.inverse()?.matrix())?;
    Ok(BridgeReport {
        sense,
        psi: psi_value,
        variational_value: cf.value,
        rel: (psi_value - cf.value).abs() / psi_value.abs().max(f64::MIN_POSITIVE),
        optimizer_rel: relative_distance(cf.h.matrix(), h_psi.matrix())?,
    })
}
