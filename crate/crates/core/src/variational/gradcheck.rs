use serde::{Deserialize, Serialize};

use crate::channels::{random_hermitian, seeded_rng};
use crate::error::Result;
use crate::linalg::PositiveDefiniteMatrix;

use super::problem::VariationalProblem;

/// Worst disagreement between the analytic gradient and central differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientCheck {
    pub directions: usize,
    /// Largest `|fd − ⟨Dφ, Δ⟩|` over unit directions `Δ`.
    pub max_abs: f64,
    /// `‖gx‖_F + ‖gy‖_F` at `H`.
    pub scale: f64,
    pub step: f64,
}

impl GradientCheck {
    pub fn rel(&self) -> f64 {
        self.max_abs / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// Compares `Dφ(H)` with central differences of the objective along seeded
/// random Hermitian unit directions. The step starts at `1e-5(1 + ‖H‖_F)` and
/// is halved until `H ± hΔ` stays positive definite.
pub fn finite_difference_check(
    vp: &VariationalProblem,
    h: &PositiveDefiniteMatrix,
    directions: usize,
    seed: u64,
) -> Result<GradientCheck> {
    let g = vp.grad_phi(h)?;
    let (_, scale) = vp.gradient_norm(h)?;
    let mut rng = seeded_rng(seed);
    let base = 1e-5 * (1.0 + h.matrix().frobenius_norm());
    let mut max_abs: f64 = 0.0;
    let mut used = base;
    for _ in 0..directions {
        let d = random_hermitian(vp.dim(), &mut rng);
        let d = d.matrix().scale(1.0 / d.matrix().frobenius_norm());
        let mut step = base;
        let (plus, minus) = loop {
            let plus = PositiveDefiniteMatrix::from_hermitian_part(&(h.matrix() + &d.scale(step)));
            let minus = PositiveDefiniteMatrix::from_hermitian_part(&(h.matrix() - &d.scale(step)));
            match (plus, minus) {
                (Ok(p), Ok(m)) => break (p, m),
                _ => step *= 0.5,
            }
        };
        used = used.min(step);
        let fd = (vp.eval_f(&plus)? - vp.eval_f(&minus)?) / (2.0 * step);
        let an = g.matrix().trace_product(&d)?.re;
        max_abs = max_abs.max((fd - an).abs());
    }
    Ok(GradientCheck {
        directions,
        max_abs,
        scale,
        step: used,
    })
}
