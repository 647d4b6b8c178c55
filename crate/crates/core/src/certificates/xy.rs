use crate::channels::{QuantumChannel, QuantumState};
use crate::entropies::ParamPoint;
use crate::error::Result;
use crate::linalg::{relative_distance, ComplexMatrix, PositiveDefiniteMatrix};

/// `b^{q/2}(b^{q/2} a^p b^{q/2})^{−q/(p+q)} b^{q/2}`, the operator `x` for the
/// pair `(ρ, σ) = (a, b)`.
pub fn x_operator(
    pt: &ParamPoint,
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
) -> Result<PositiveDefiniteMatrix> {
    let bq = b.power(pt.q / 2.0)?;
    let inner = bq
        .sandwich(&a.power(pt.p)?)
        .map_err(|e| e.at_step("σ^{q/2} ρ^p σ^{q/2}"))?;
    let mid = inner.power(-pt.q / (pt.p + pt.q))?;
    bq.sandwich(&mid).map_err(|e| e.at_step("x (σ side)"))
}

/// `a^{−p/2}(a^{p/2} b^q a^{p/2})^{p/(p+q)} a^{−p/2}`, the second expression
/// for `x`.
pub fn x_operator_rho_side(
    pt: &ParamPoint,
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
) -> Result<PositiveDefiniteMatrix> {
    let ap = a.power(pt.p / 2.0)?;
    let inner = ap
        .sandwich(&b.power(pt.q)?)
        .map_err(|e| e.at_step("ρ^{p/2} σ^q ρ^{p/2}"))?;
    let mid = inner.power(pt.p / (pt.p + pt.q))?;
    a.power(-pt.p / 2.0)?
        .sandwich(&mid)
        .map_err(|e| e.at_step("x (ρ side)"))
}

/// Relative distance between the two expressions for `x`.
pub fn x_dual_form_residual(pt: &ParamPoint, a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<f64> {
    relative_distance(x_operator(pt, a, b)?.matrix(), x_operator_rho_side(pt, a, b)?.matrix())
}

pub fn compute_x(pt: &ParamPoint, rho: &QuantumState, sigma: &QuantumState) -> Result<PositiveDefiniteMatrix> {
    x_operator(pt, rho.pd(), sigma.pd())
}

/// `x` built from `(E(ρ), E(σ))`; fails with `ImageNotFaithful` if either
/// image is singular.
pub fn compute_y(
    pt: &ParamPoint,
    rho: &QuantumState,
    sigma: &QuantumState,
    channel: &QuantumChannel,
) -> Result<PositiveDefiniteMatrix> {
    let er = channel.apply_state(rho)?;
    let es = channel.apply_state(sigma)?;
    x_operator(pt, er.pd(), es.pd())
}

/// Both sides of `(a^{p/2} x a^{p/2})^{1/p} = (a^{p/2} b^q a^{p/2})^{1/(p+q)}`.
pub fn consistency_sides(
    pt: &ParamPoint,
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
    x: &PositiveDefiniteMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let ap = a.power(pt.p / 2.0)?;
    let lhs = ap.sandwich(x)?.power(1.0 / pt.p)?;
    let rhs = ap.sandwich(&b.power(pt.q)?)?.power(1.0 / (pt.p + pt.q))?;
    Ok((lhs.into_matrix(), rhs.into_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, identity_channel, make_channel, random_state, ChannelSpec};

    fn pt(a: f64, z: f64) -> ParamPoint {
        ParamPoint::new(a, z).unwrap()
    }

    #[test]
    fn equal_states_give_identity() {
        let rho = random_state(3, 1).unwrap();
        for (a, z) in [(0.5, 0.5), (1.5, 1.0), (3.0, 2.5)] {
            let x = compute_x(&pt(a, z), &rho, &rho).unwrap();
            assert!(x.matrix().distance(&ComplexMatrix::identity(3)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn commuting_oracle() {
        let (r, s) = ([0.2, 0.3, 0.5], [0.6, 0.1, 0.3]);
        let rho = QuantumState::from_probabilities(&r).unwrap();
        let sigma = QuantumState::from_probabilities(&s).unwrap();
        let x = pt(1.5, 1.0);
        let e = x.p * x.q / (x.p + x.q);
        let got = compute_x(&x, &rho, &sigma).unwrap();
        for i in 0..3 {
            let want = (s[i] / r[i]).powf(e);
            assert!((got.matrix()[(i, i)].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_forms_agree() {
        let rho = random_state(3, 2).unwrap();
        let sigma = random_state(3, 3).unwrap();
        for (a, z) in [(1.5, 1.0), (0.3, 0.7), (2.0, 2.0), (4.0, 3.5)] {
            assert!(x_dual_form_residual(&pt(a, z), rho.pd(), sigma.pd()).unwrap() < 1e-9);
        }
    }

    #[test]
    fn y_for_identity_and_unitary() {
        let rho = random_state(2, 4).unwrap();
        let sigma = random_state(2, 5).unwrap();
        let x = pt(1.5, 1.0);
        let xm = compute_x(&x, &rho, &sigma).unwrap();
        let y = compute_y(&x, &rho, &sigma, &identity_channel(2).unwrap()).unwrap();
        assert!(relative_distance(xm.matrix(), y.matrix()).unwrap() < 1e-12);

        let e = make_channel(&ChannelSpec::RandomUnitary { dim: 2, seed: 9 }).unwrap();
        let u = &e.kraus()[0];
        let y = compute_y(&x, &rho, &sigma, &e).unwrap();
        let want = u.sandwich(xm.matrix()).unwrap();
        assert!(relative_distance(y.matrix(), &want).unwrap() < 1e-10);
    }

    #[test]
    fn y_for_depolarizing_is_isotropic() {
        let rho = random_state(3, 4).unwrap();
        let sigma = random_state(3, 5).unwrap();
        let y = compute_y(&pt(1.5, 1.0), &rho, &sigma, &depolarizing(3, 1.0).unwrap()).unwrap();
        let c = y.matrix()[(0, 0)].re;
        assert!(y.matrix().distance(&ComplexMatrix::identity(3).scale(c)).unwrap() < 1e-12);
    }

    #[test]
    fn consistency_identity() {
        let rho = random_state(3, 6).unwrap();
        let sigma = random_state(3, 7).unwrap();
        for (a, z) in [(1.5, 1.0), (0.6, 1.0), (3.0, 2.5)] {
            let x = pt(a, z);
            let xm = compute_x(&x, &rho, &sigma).unwrap();
            let (l, r) = consistency_sides(&x, rho.pd(), sigma.pd(), &xm).unwrap();
            assert!(relative_distance(&l, &r).unwrap() < 1e-9);
        }
    }
}
