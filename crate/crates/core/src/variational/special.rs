use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PositiveDefiniteMatrix};

/// Optimizer of a single-matrix variational formula and its optimal value.
#[derive(Debug, Clone)]
pub struct SpecialOptimum {
    pub z: PositiveDefiniteMatrix,
    /// `Tr(K*A^rK)^{1/r}`.
    pub value: f64,
    /// Objective evaluated at `z`.
    pub objective: f64,
}

fn weighted(a: &PositiveDefiniteMatrix, k: &ComplexMatrix, r: f64) -> Result<PositiveDefiniteMatrix> {
    if !k.is_square() || k.rows() != a.dim() {
        return Err(Error::dims("K must be square and match A"));
    }
    a.power(r)?.congruence(&k.adjoint()).map_err(|e| e.at_step("K*A^rK"))
}

/// `Tr(M Z^e)` for Hermitian `M`.
fn trace_against(m: &PositiveDefiniteMatrix, z: &PositiveDefiniteMatrix, e: f64) -> Result<f64> {
    Ok(m.matrix().trace_product(z.power(e)?.matrix())?.re)
}

/// `(1/s)Tr(K*A^sK Z^{1−s}) − ((1−s)/s)Tr Z`.
pub fn special_max_objective(
    a: &PositiveDefiniteMatrix,
    k: &ComplexMatrix,
    s: f64,
    z: &PositiveDefiniteMatrix,
) -> Result<f64> {
    let m = weighted(a, k, s)?;
    Ok(trace_against(&m, z, 1.0 - s)? / s - (1.0 - s) / s * z.trace())
}

/// `(1/t)Tr(K*A^tK Z^{1−t}) + ((t−1)/t)Tr Z`.
pub fn special_min_objective(
    a: &PositiveDefiniteMatrix,
    k: &ComplexMatrix,
    t: f64,
    z: &PositiveDefiniteMatrix,
) -> Result<f64> {
    let m = weighted(a, k, t)?;
    Ok(trace_against(&m, z, 1.0 - t)? / t + (t - 1.0) / t * z.trace())
}

fn optimum(a: &PositiveDefiniteMatrix, k: &ComplexMatrix, r: f64) -> Result<(PositiveDefiniteMatrix, f64)> {
    let m = weighted(a, k, r)?;
    Ok((m.power(1.0 / r)?, m.trace_power(1.0 / r)))
}

/// Maximizer `Z̄ = (K*A^sK)^{1/s}` for `0 < s < 1`.
pub fn special_max(a: &PositiveDefiniteMatrix, k: &ComplexMatrix, s: f64) -> Result<SpecialOptimum> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::params(format!("s = {s} must lie in (0, 1)")));
    }
    let (z, value) = optimum(a, k, s)?;
    let objective = special_max_objective(a, k, s, &z)?;
    Ok(SpecialOptimum { z, value, objective })
}

/// Minimizer `Z̲ = (K*A^tK)^{1/t}` for `t > 1`.
pub fn special_min(a: &PositiveDefiniteMatrix, k: &ComplexMatrix, t: f64) -> Result<SpecialOptimum> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::params(format!("t = {t} must exceed 1")));
    }
    let (z, value) = optimum(a, k, t)?;
    let objective = special_min_objective(a, k, t, &z)?;
    Ok(SpecialOptimum { z, value, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ginibre, random_hermitian, random_unitary, seeded_rng};

    #[test]
    fn diagonal_min() {
        let a = PositiveDefiniteMatrix::from_real_diag(&[1.0, 2.0]).unwrap();
        let r = special_min(&a, &ComplexMatrix::identity(2), 2.0).unwrap();
        assert!(r.z.matrix().distance(a.matrix()).unwrap() < 1e-14);
        assert!((r.value - 3.0).abs() < 1e-13);
        assert!((r.objective - 3.0).abs() < 1e-13);
    }

    #[test]
    fn unitary_kernel_max() {
        let u = random_unitary(3, &mut seeded_rng(2));
        let r = special_max(&PositiveDefiniteMatrix::identity(3), &u, 0.5).unwrap();
        assert!(r.z.matrix().distance(&ComplexMatrix::identity(3)).unwrap() < 1e-12);
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_edge_exponents() {
        let a = PositiveDefiniteMatrix::identity(2);
        let k = ComplexMatrix::identity(2);
        assert!(special_max(&a, &k, 1.0).is_err());
        assert!(special_max(&a, &k, 0.0).is_err());
        assert!(special_min(&a, &k, 1.0).is_err());
    }

    #[test]
    fn local_optimality() {
        let mut rng = seeded_rng(8);
        let g = ginibre(3, 3, &mut rng);
        let a =
            PositiveDefiniteMatrix::from_hermitian_part(&(&(&g * &g.adjoint()) + &ComplexMatrix::identity(3))).unwrap();
        let k = ginibre(3, 3, &mut rng);
        let mx = special_max(&a, &k, 0.5).unwrap();
        let mn = special_min(&a, &k, 2.0).unwrap();
        assert!((mx.objective - mx.value).abs() <= 1e-10 * mx.value);
        assert!((mn.objective - mn.value).abs() <= 1e-10 * mn.value);
        for _ in 0..20 {
            let p = random_hermitian(3, &mut rng);
            let bump = |z: &PositiveDefiniteMatrix| {
                let d = z.matrix().sandwich(p.matrix()).unwrap();
                PositiveDefiniteMatrix::from_hermitian_part(
                    &(z.matrix() + &d.scale(1e-3 / p.matrix().frobenius_norm())),
                )
                .unwrap()
            };
            assert!(special_max_objective(&a, &k, 0.5, &bump(&mx.z)).unwrap() <= mx.value + 1e-10);
            assert!(special_min_objective(&a, &k, 2.0, &bump(&mn.z)).unwrap() >= mn.value - 1e-10);
        }
    }
}
