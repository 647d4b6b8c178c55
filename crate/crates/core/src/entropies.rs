//! The trace functional `Ψ_{p,q}`, the α-z Rényi relative entropies and the
//! region of `(α, z)` on which they are monotone under channels.

use serde::{Deserialize, Serialize};

use crate::channels::QuantumState;
use crate::error::{Error, Result};
use crate::linalg::PositiveDefiniteMatrix;
use crate::tolerances::REGION_EDGE_TOL;

/// A parameter pair `(α, z)` with the derived exponents `p = α/z`,
/// `q = (1 − α)/z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub alpha: f64,
    pub z: f64,
    pub p: f64,
    pub q: f64,
}

impl ParamPoint {
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        if !alpha.is_finite() || !z.is_finite() {
            return Err(Error::params(format!("non-finite (α, z) = ({alpha}, {z})")));
        }
        if alpha == 1.0 {
            return Err(Error::params("α = 1 is the Umegaki limit, not an α-z point"));
        }
        if !(z > 0.0) {
            return Err(Error::params(format!("z must be positive, got {z}")));
        }
        Ok(Self {
            alpha,
            z,
            p: alpha / z,
            q: (1.0 - alpha) / z,
        })
    }

    pub fn region(&self) -> RegionVerdict {
        region_check(self)
    }
}

/// Which of the three monotonicity cases `(α, z)` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub valid: bool,
    /// 1, 2 or 3; the lowest matching case on overlaps.
    pub case_id: Option<u8>,
    /// Some active inequality of the matching case is tight within the edge
    /// tolerance.
    pub boundary: bool,
}

/// Monotonicity region, with closed edges:
///
/// 1. `0 < α < 1` and `z ≥ max(α, 1 − α)`
/// 2. `1 < α ≤ 2` and `α/2 ≤ z ≤ α`
/// 3. `2 ≤ α` and `α − 1 ≤ z ≤ α`
pub fn region_check(pt: &ParamPoint) -> RegionVerdict {
    let (a, z, tol) = (pt.alpha, pt.z, REGION_EDGE_TOL);
    let near = |x: f64, y: f64| (x - y).abs() <= tol;

    let mut cases: Vec<(u8, bool)> = Vec::new();
    if a > 0.0 && a < 1.0 {
        let lo = a.max(1.0 - a);
        if z >= lo - tol {
            cases.push((1, near(z, lo)));
        }
    }
    if a > 1.0 && a <= 2.0 + tol && z >= a / 2.0 - tol && z <= a + tol {
        cases.push((2, near(a, 2.0) || near(z, a / 2.0) || near(z, a)));
    }
    if a >= 2.0 - tol && z >= a - 1.0 - tol && z <= a + tol {
        cases.push((3, near(a, 2.0) || near(z, a - 1.0) || near(z, a)));
    }
    match cases.first() {
        Some(&(id, _)) => RegionVerdict {
            valid: true,
            case_id: Some(id),
            boundary: cases.iter().any(|&(_, b)| b),
        },
        None => RegionVerdict {
            valid: false,
            case_id: None,
            boundary: false,
        },
    }
}

fn check_pair(a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dims(format!("pair of dimensions {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `Ψ_{p,q}(A, B) = Tr(B^{q/2} A^p B^{q/2})^{1/(p+q)}`.
pub fn psi(pt: &ParamPoint, a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<f64> {
    check_pair(a, b)?;
    let inner = b
        .power(pt.q / 2.0)?
        .sandwich(&a.power(pt.p)?)
        .map_err(|e| e.at_step("B^{q/2} A^p B^{q/2}"))?;
    Ok(inner.trace_power(1.0 / (pt.p + pt.q)))
}

/// The same functional through `Tr(A^{p/2} B^q A^{p/2})^{1/(p+q)}`.
pub fn psi_a_side(pt: &ParamPoint, a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<f64> {
    check_pair(a, b)?;
    let inner = a
        .power(pt.p / 2.0)?
        .sandwich(&b.power(pt.q)?)
        .map_err(|e| e.at_step("A^{p/2} B^q A^{p/2}"))?;
    Ok(inner.trace_power(1.0 / (pt.p + pt.q)))
}

/// `D_{α,z}(ρ‖σ) = ln Ψ_{p,q}(ρ, σ) / (α − 1)`.
pub fn d_alpha_z(pt: &ParamPoint, rho: &QuantumState, sigma: &QuantumState) -> Result<f64> {
    Ok(psi(pt, rho.pd(), sigma.pd())?.ln() / (pt.alpha - 1.0))
}

/// Petz–Rényi divergence `ln Tr(ρ^α σ^{1−α}) / (α − 1)`.
pub fn d_petz(alpha: f64, rho: &QuantumState, sigma: &QuantumState) -> Result<f64> {
    ParamPoint::new(alpha, 1.0)?;
    check_pair(rho.pd(), sigma.pd())?;
    let t = rho
        .power(alpha)?
        .matrix()
        .trace_product(sigma.power(1.0 - alpha)?.matrix())?;
    Ok(t.re.ln() / (alpha - 1.0))
}

/// Sandwiched Rényi divergence `ln Tr(σ^γ ρ σ^γ)^α / (α − 1)`,
/// `γ = (1 − α)/(2α)`.
pub fn d_sandwiched(alpha: f64, rho: &QuantumState, sigma: &QuantumState) -> Result<f64> {
    ParamPoint::new(alpha, alpha)?;
    check_pair(rho.pd(), sigma.pd())?;
    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let inner = sigma.power(gamma)?.sandwich(rho.pd())?;
    Ok(inner.trace_power(alpha).ln() / (alpha - 1.0))
}

/// Umegaki relative entropy `Tr ρ(ln ρ − ln σ)`.
pub fn d_umegaki(rho: &QuantumState, sigma: &QuantumState) -> Result<f64> {
    check_pair(rho.pd(), sigma.pd())?;
    let diff = rho.pd().log().matrix().try_sub(sigma.pd().log().matrix())?;
    Ok(rho.matrix().trace_product(&diff)?.re)
}

/// Classical Rényi divergence `ln Σ p_i^α q_i^{1−α} / (α − 1)`.
pub fn classical_renyi(alpha: f64, p: &[f64], q: &[f64]) -> Result<f64> {
    if !alpha.is_finite() || alpha == 1.0 {
        return Err(Error::params(format!("α must be finite and ≠ 1, got {alpha}")));
    }
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::params("probability vectors differ in length"));
    }
    for v in [p, q] {
        if v.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::params(format!("entries must be strictly positive: {v:?}")));
        }
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::params(format!("vector sums to {s}, not 1")));
        }
    }
    let sum: f64 = p.iter().zip(q).map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha)).sum();
    Ok(sum.ln() / (alpha - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::random_state;

    fn pt(a: f64, z: f64) -> ParamPoint {
        ParamPoint::new(a, z).unwrap()
    }

    #[test]
    fn derived_exponents() {
        let x = pt(1.5, 0.75);
        assert_eq!(x.p, 2.0);
        assert!((x.q + 2.0 / 3.0).abs() < 1e-15);
        assert!((x.p + x.q - 1.0 / x.z).abs() < 1e-15);
        assert!(ParamPoint::new(1.0, 1.0).is_err());
        assert!(ParamPoint::new(0.5, 0.0).is_err());
        assert!(ParamPoint::new(0.5, -1.0).is_err());
    }

    #[test]
    fn region_examples() {
        let v = region_check(&pt(1.5, 1.0));
        assert_eq!((v.valid, v.case_id, v.boundary), (true, Some(2), false));
        assert!(!region_check(&pt(0.3, 0.2)).valid);
        let v = region_check(&pt(2.0, 2.0));
        assert!(v.valid && v.boundary);
        assert_eq!(v.case_id, Some(2));
        assert!(region_check(&pt(3.0, 2.0)).boundary);
        assert_eq!(region_check(&pt(4.0, 3.5)).case_id, Some(3));
        assert!(!region_check(&pt(3.0, 1.5)).valid);
        assert!(!region_check(&pt(1.5, 2.0)).valid);
        assert!(!region_check(&pt(-0.5, 2.0)).valid);
        assert!(region_check(&pt(0.3, 0.7)).boundary);
        assert!(region_check(&pt(0.3, 0.7 - 5e-13)).valid);
        assert!(!region_check(&pt(0.3, 0.7 - 1e-9)).valid);
    }

    #[test]
    fn psi_of_state_with_itself_is_one() {
        let rho = random_state(3, 1).unwrap();
        for (a, z) in [(0.5, 0.5), (1.5, 1.0), (3.0, 2.5)] {
            let v = psi(&pt(a, z), rho.pd(), rho.pd()).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_commuting_oracle() {
        let a = PositiveDefiniteMatrix::from_real_diag(&[0.2, 1.5, 3.0]).unwrap();
        let b = PositiveDefiniteMatrix::from_real_diag(&[0.7, 0.4, 2.2]).unwrap();
        let x = pt(1.5, 0.75);
        let s = x.p + x.q;
        let want: f64 = [(0.2f64, 0.7f64), (1.5, 0.4), (3.0, 2.2)]
            .iter()
            .map(|(ai, bi)| ai.powf(x.p / s) * bi.powf(x.q / s))
            .sum();
        assert!((psi(&x, &a, &b).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn psi_two_forms_agree() {
        let rho = random_state(4, 3).unwrap();
        let sigma = random_state(4, 4).unwrap();
        for (a, z) in [(0.3, 0.7), (1.5, 1.0), (2.0, 2.0), (4.0, 3.5)] {
            let x = pt(a, z);
            let l = psi(&x, rho.pd(), sigma.pd()).unwrap();
            let r = psi_a_side(&x, rho.pd(), sigma.pd()).unwrap();
            assert!((l - r).abs() <= 1e-10 * l.abs());
        }
    }

    #[test]
    fn commuting_example() {
        let rho = QuantumState::from_probabilities(&[0.5, 0.5]).unwrap();
        let sigma = QuantumState::from_probabilities(&[0.25, 0.75]).unwrap();
        let want = (4.0f64 / 3.0).ln();
        assert!((d_alpha_z(&pt(2.0, 1.0), &rho, &sigma).unwrap() - want).abs() < 1e-14);
        assert!((classical_renyi(2.0, &[0.5, 0.5], &[0.25, 0.75]).unwrap() - want).abs() < 1e-15);
        assert!((d_petz(2.0, &rho, &sigma).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn sandwiched_matches_z_equals_alpha() {
        let rho = random_state(3, 5).unwrap();
        let sigma = random_state(3, 6).unwrap();
        for a in [0.6, 1.5, 2.0, 3.0] {
            let d1 = d_alpha_z(&pt(a, a), &rho, &sigma).unwrap();
            let d2 = d_sandwiched(a, &rho, &sigma).unwrap();
            assert!((d1 - d2).abs() < 1e-11);
            let p1 = d_alpha_z(&pt(a, 1.0), &rho, &sigma).unwrap();
            let p2 = d_petz(a, &rho, &sigma).unwrap();
            assert!((p1 - p2).abs() < 1e-11);
        }
    }

    #[test]
    fn identical_states_give_zero() {
        let rho = random_state(3, 7).unwrap();
        assert!(d_alpha_z(&pt(0.5, 0.5), &rho, &rho).unwrap().abs() < 1e-12);
        assert!(d_petz(1.5, &rho, &rho).unwrap().abs() < 1e-12);
        assert!(d_sandwiched(1.5, &rho, &rho).unwrap().abs() < 1e-12);
        assert!(d_umegaki(&rho, &rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn classical_preconditions() {
        assert!(classical_renyi(0.5, &[1.0, 0.0], &[0.5, 0.5]).is_err());
        assert!(classical_renyi(1.0, &[0.5, 0.5], &[0.5, 0.5]).is_err());
        assert!(classical_renyi(0.5, &[0.5, 0.5], &[0.5, 0.5]).unwrap().abs() < 1e-15);
    }
}
