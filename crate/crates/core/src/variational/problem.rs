use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{random_unitary, seeded_rng};

use crate::error::{Error, Result};
use crate::linalg::{gram, gram_adjoint, relative_distance, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix};

/// Positive exponents with `1/r0 = 1/r1 + 1/r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleExponents {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl TripleExponents {
    pub fn new(r0: f64, r1: f64, r2: f64) -> Result<Self> {
        if [r0, r1, r2].iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::params(format!("exponents must be positive: ({r0}, {r1}, {r2})")));
        }
        let gap = (1.0 / r0 - 1.0 / r1 - 1.0 / r2).abs();
        if gap > 1e-12 * (1.0 / r0).max(1.0) {
            return Err(Error::params(format!(
                "1/r0 = 1/r1 + 1/r2 fails by {gap:.3e} for ({r0}, {r1}, {r2})"
            )));
        }
        Ok(Self { r0, r1, r2 })
    }

    /// Completes `(r1, r2)` with `r0 = r1 r2/(r1 + r2)`.
    pub fn from_r1_r2(r1: f64, r2: f64) -> Result<Self> {
        Self::new(r1 * r2 / (r1 + r2), r1, r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// `Tr|XY|^{2r0} = min_H (r0/r1)Tr(XHX*)^{r1} + (r0/r2)Tr(Y*H^{-1}Y)^{r2}`
    Min,
    /// `Tr|XY|^{2r1} = max_H (r1/r0)Tr(XHX*)^{r0} − (r1/r2)Tr(Y^{-1}HY^{-*})^{r2}`
    Max,
}

/// A variational problem over the positive-definite cone for invertible
/// `X`, `Y`.
#[derive(Debug, Clone)]
pub struct VariationalProblem {
    pub exps: TripleExponents,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub sense: Sense,
    x_inv: ComplexMatrix,
    y_inv: ComplexMatrix,
}

/// Closed-form optimizer with its consistency checks.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub h: PositiveDefiniteMatrix,
    /// `Tr|XY|^{2r0}` (min) or `Tr|XY|^{2r1}` (max).
    pub value: f64,
    /// Objective evaluated at `h`.
    pub objective: f64,
    /// Relative distance between the `X`-side and `Y`-side expressions.
    pub dual_form: f64,
    /// Largest relative deviation of the two trace terms at `h` from `value`.
    pub balance: f64,
}

impl VariationalProblem {
    pub fn new(exps: TripleExponents, x: ComplexMatrix, y: ComplexMatrix, sense: Sense) -> Result<Self> {
        if !x.is_square() || !y.is_square() || x.rows() != y.rows() {
            return Err(Error::dims("X and Y must be square of the same size"));
        }
        gram(&x)?;
        gram(&y)?;
        let x_inv = x.inverse()?;
        let y_inv = y.inverse()?;
        Ok(Self {
            exps,
            x,
            y,
            sense,
            x_inv,
            y_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    fn check(&self, h: &PositiveDefiniteMatrix) -> Result<()> {
        if h.dim() != self.dim() {
            return Err(Error::dims("H does not match the problem dimension"));
        }
        Ok(())
    }

    /// `X H X*`.
    fn x_term(&self, h: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
        h.congruence(&self.x).map_err(|e| e.at_step("X H X*"))
    }

    /// `Y^{-1} H Y^{-*}`; its inverse is `Y* H^{-1} Y`.
    fn y_term(&self, h: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
        h.congruence(&self.y_inv).map_err(|e| e.at_step("Y^{-1} H Y^{-*}"))
    }

    /// `Tr|XY|^{2r}`.
    pub fn trace_modulus_power(&self, r: f64) -> Result<f64> {
        Ok(gram(&self.x.try_mul(&self.y)?)?.trace_power(r))
    }

    /// Objective at `H`.
    pub fn eval_f(&self, h: &PositiveDefiniteMatrix) -> Result<f64> {
        self.check(h)?;
        let TripleExponents { r0, r1, r2 } = self.exps;
        let xt = self.x_term(h)?;
        let yt = self.y_term(h)?;
        Ok(match self.sense {
            Sense::Min => (r0 / r1) * xt.trace_power(r1) + (r0 / r2) * yt.trace_power(-r2),
            Sense::Max => (r1 / r0) * xt.trace_power(r0) - (r1 / r2) * yt.trace_power(r2),
        })
    }

    /// The two Hermitian pieces of the gradient, returned separately so callers
    /// can form a scale. Min sense:
    /// `r0 X*(XHX*)^{r1−1}X` and `r0 Y^{-*}(Y^{-1}HY^{-*})^{−r2−1}Y^{-1}`;
    /// max sense: `r1 X*(XHX*)^{r0−1}X` and `r1 Y^{-*}(Y^{-1}HY^{-*})^{r2−1}Y^{-1}`.
    pub fn gradient_parts(&self, h: &PositiveDefiniteMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
        self.check(h)?;
        let TripleExponents { r0, r1, r2 } = self.exps;
        let xt = self.x_term(h)?;
        let yt = self.y_term(h)?;
        let (c, ex, ey) = match self.sense {
            Sense::Min => (r0, r1 - 1.0, -r2 - 1.0),
            Sense::Max => (r1, r0 - 1.0, r2 - 1.0),
        };
        let gx = self.x.adjoint().sandwich(xt.power(ex)?.matrix())?.scale(c);
        let gy = self.y_inv.adjoint().sandwich(yt.power(ey)?.matrix())?.scale(c);
        Ok((gx, gy))
    }

    /// Gradient `Dφ(H)` with respect to the Hilbert–Schmidt pairing.
    pub fn grad_phi(&self, h: &PositiveDefiniteMatrix) -> Result<HermitianMatrix> {
        let (gx, gy) = self.gradient_parts(h)?;
        Ok(HermitianMatrix::from_hermitian_part(&gx.try_sub(&gy)?))
    }

    /// `‖Dφ(H)‖_F` and the scale `‖gx‖_F + ‖gy‖_F` it is measured against.
    pub fn gradient_norm(&self, h: &PositiveDefiniteMatrix) -> Result<(f64, f64)> {
        let (gx, gy) = self.gradient_parts(h)?;
        Ok((gx.distance(&gy)?, gx.frobenius_norm() + gy.frobenius_norm()))
    }

    /// Closed-form optimizer for either sense.
    pub fn closed_form(&self) -> Result<ClosedForm> {
        let TripleExponents { r0, r1, r2 } = self.exps;
        let xy = self.x.try_mul(&self.y)?;
        let left = gram_adjoint(&xy)?; // |Y*X*|²
        let right = gram(&xy)?; // |XY|²
        let (a_exp, b_exp, value_exp) = match self.sense {
            Sense::Min => (r0 / r1, -r0 / r2, r0),
            Sense::Max => (r1 / r0, r1 / r2, r1),
        };
        let h_x = PositiveDefiniteMatrix::from_hermitian_part(&self.x_inv.sandwich(left.power(a_exp)?.matrix())?)
            .map_err(|e| e.at_step("X-side optimizer"))?;
        let h_y = PositiveDefiniteMatrix::from_hermitian_part(&self.y.sandwich(right.power(b_exp)?.matrix())?)
            .map_err(|e| e.at_step("Y-side optimizer"))?;
        let dual_form = relative_distance(h_x.matrix(), h_y.matrix())?;
        let value = right.trace_power(value_exp);
        let objective = self.eval_f(&h_x)?;
        let xt = self.x_term(&h_x)?;
        let yt = self.y_term(&h_x)?;
        let (tx, ty) = match self.sense {
            Sense::Min => (xt.trace_power(r1), yt.trace_power(-r2)),
            Sense::Max => (xt.trace_power(r0), yt.trace_power(r2)),
        };
        let balance = ((tx - value).abs()).max((ty - value).abs()) / value.abs().max(f64::MIN_POSITIVE);
        Ok(ClosedForm {
            h: h_x,
            value,
            objective,
            dual_form,
            balance,
        })
    }
}

/// Seeded random invertible matrix `U diag(s) V` with Haar unitaries `U`, `V`
/// and singular values drawn uniformly from `[0.5, 2]`.
pub fn random_invertible(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let u = random_unitary(dim, &mut rng);
    let v = random_unitary(dim, &mut rng);
    let s: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..=2.0)).collect();
    &(&u * &ComplexMatrix::from_real_diag(&s)) * &v
}

/// Seeded problem with `X`, `Y` from [`random_invertible`].
pub fn random_problem(dim: usize, exps: TripleExponents, sense: Sense, seed: u64) -> Result<VariationalProblem> {
    let x = random_invertible(dim, seed.wrapping_mul(2));
    let y = random_invertible(dim, seed.wrapping_mul(2).wrapping_add(1));
    VariationalProblem::new(exps, x, y, sense)
}

/// Closed-form minimizer; fails if the problem is a maximization.
pub fn closed_form_min(vp: &VariationalProblem) -> Result<ClosedForm> {
    if vp.sense != Sense::Min {
        return Err(Error::params("closed_form_min needs a minimization problem"));
    }
    vp.closed_form()
}

/// Closed-form maximizer; fails if the problem is a minimization.
pub fn closed_form_max(vp: &VariationalProblem) -> Result<ClosedForm> {
    if vp.sense != Sense::Max {
        return Err(Error::params("closed_form_max needs a maximization problem"));
    }
    vp.closed_form()
}
