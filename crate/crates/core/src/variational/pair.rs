use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gram, gram_adjoint, ComplexMatrix, PositiveDefiniteMatrix};

/// The system `A^{a1} = K B^{b1} K*`, `A^{a2} = K B^{b2} K*` for positive
/// definite `A`, `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEquation {
    pub k: ComplexMatrix,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Residuals of substituting a solution back into both equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairResiduals {
    pub first: f64,
    pub second: f64,
    /// Largest Frobenius norm among the four sides.
    pub scale: f64,
}

impl PairResiduals {
    pub fn max_relative(&self) -> f64 {
        self.first.max(self.second) / self.scale.max(f64::MIN_POSITIVE)
    }
}

impl PairEquation {
    pub fn new(k: ComplexMatrix, a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self> {
        if !k.is_square() {
            return Err(Error::dims("K must be square"));
        }
        if [a1, a2, b1, b2].iter().any(|v| !v.is_finite()) {
            return Err(Error::params("non-finite exponent"));
        }
        let det = a1 * b2 - a2 * b1;
        let guard = 1e-12 * (a1 * b2).abs().max((a2 * b1).abs()).max(1.0);
        if !(det.abs() > guard) {
            return Err(Error::DegenerateCoefficients(det));
        }
        Ok(Self { k, a1, a2, b1, b2 })
    }

    /// `a2·b1 − a1·b2`.
    fn denominator(&self) -> f64 {
        self.a2 * self.b1 - self.a1 * self.b2
    }

    /// `‖A^{a1} − K B^{b1} K*‖_F` and `‖A^{a2} − K B^{b2} K*‖_F`.
    pub fn residuals(&self, a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<PairResiduals> {
        let mut scale: f64 = 0.0;
        let mut side = |ea: f64, eb: f64| -> Result<f64> {
            let lhs = a.power(ea)?;
            let rhs = self.k.sandwich(b.power(eb)?.matrix())?;
            scale = scale.max(lhs.matrix().frobenius_norm()).max(rhs.frobenius_norm());
            lhs.matrix().distance(&rhs)
        };
        let first = side(self.a1, self.b1)?;
        let second = side(self.a2, self.b2)?;
        Ok(PairResiduals { first, second, scale })
    }
}

/// The unique solution `A = |K*|^{2(b1−b2)/(a2b1−a1b2)}`,
/// `B = |K|^{2(a1−a2)/(a2b1−a1b2)}`.
pub fn solve_pair_equation(pe: &PairEquation) -> Result<(PositiveDefiniteMatrix, PositiveDefiniteMatrix)> {
    let den = pe.denominator();
    let a = gram_adjoint(&pe.k)?.power((pe.b1 - pe.b2) / den)?;
    let b = gram(&pe.k)?.power((pe.a1 - pe.a2) / den)?;
    Ok((a, b))
}
