use serde::{Deserialize, Serialize};

use crate::channels::{ginibre, seeded_rng};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PositiveDefiniteMatrix};

use super::problem::{Sense, VariationalProblem};

/// How each step direction is formed from the gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepDirection {
    /// `−Dφ(H)`.
    Gradient,
    /// `−H Dφ(H) H`, the gradient for the metric `Tr(H^{-1}AH^{-1}B)`.
    NaturalGradient,
    /// Newton step in the coordinates `H^{1/2}(I + T)H^{1/2}` with a
    /// central-difference Hessian; falls back to the natural gradient when the
    /// Newton step is not a descent direction.
    Newton,
}

/// How the first trial step of each line search is chosen in the gradient
/// modes. Newton steps always start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Always start from `initial_step`.
    Fixed,
    /// Barzilai–Borwein step from the last two iterates, falling back to
    /// `initial_step` on the first iteration or a non-positive curvature estimate.
    BarzilaiBorwein,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Stop when `‖Dφ‖_F ≤ grad_tol · scale`.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
    /// Step shrink factor during backtracking.
    pub backtrack: f64,
    pub direction: StepDirection,
    pub step_rule: StepRule,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-9,
            max_iter: 5000,
            initial_step: 1.0,
            backtrack: 0.5,
            direction: StepDirection::Newton,
            step_rule: StepRule::Fixed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub h: PositiveDefiniteMatrix,
    pub value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub grad_scale: f64,
}

/// Smallest step tried before the line search gives up.
const MIN_STEP: f64 = 1e-30;
/// Difference step for the Newton Hessian in normalized coordinates.
const HESSIAN_STEP: f64 = 1e-4;

/// Orthonormal basis of the real space of `n × n` Hermitian matrices.
fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i..n {
            if i == j {
                let mut e = ComplexMatrix::zeros(n, n);
                e[(i, i)] = 1.0.into();
                basis.push(e);
            } else {
                let mut re = ComplexMatrix::zeros(n, n);
                re[(i, j)] = r.into();
                re[(j, i)] = r.into();
                let mut im = ComplexMatrix::zeros(n, n);
                im[(i, j)] = num_complex::Complex64::new(0.0, r);
                im[(j, i)] = num_complex::Complex64::new(0.0, -r);
                basis.push(re);
                basis.push(im);
            }
        }
    }
    basis
}

fn coords(m: &ComplexMatrix, basis: &[ComplexMatrix]) -> Result<Vec<f64>> {
    basis.iter().map(|e| Ok(m.trace_product(e)?.re)).collect()
}

/// Real linear solve through the complex inverse.
fn solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    let inv = ComplexMatrix::from_fn(n, n, |i, j| a[i][j].into()).inverse()?;
    Ok((0..n).map(|i| (0..n).map(|j| inv[(i, j)].re * b[j]).sum()).collect())
}

/// The objective with the sign that turns the problem into a minimization.
struct Signed<'a> {
    vp: &'a VariationalProblem,
    sign: f64,
}

impl Signed<'_> {
    fn value(&self, h: &PositiveDefiniteMatrix) -> Result<f64> {
        Ok(self.sign * self.vp.eval_f(h)?)
    }

    fn grad(&self, h: &PositiveDefiniteMatrix) -> Result<ComplexMatrix> {
        Ok(self.vp.grad_phi(h)?.into_matrix().scale(self.sign))
    }

    /// Gradient at `R(I + T)R` pulled back to `T`-coordinates.
    fn grad_t(&self, r: &ComplexMatrix, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = r.rows();
        let h = PositiveDefiniteMatrix::from_hermitian_part(&r.sandwich(&(&ComplexMatrix::identity(n) + t))?)?;
        r.sandwich(&self.grad(&h)?)
    }

    /// Newton direction expressed as a change of `H`, or `None` if the Newton
    /// step is unusable.
    fn newton_direction(&self, h: &PositiveDefiniteMatrix, basis: &[ComplexMatrix]) -> Result<Option<ComplexMatrix>> {
        let r = h.power(0.5)?.into_matrix();
        let n = h.dim();
        let g = coords(&self.grad_t(&r, &ComplexMatrix::zeros(n, n))?, basis)?;
        let mut hess = Vec::with_capacity(basis.len());
        for e in basis {
            let plus = self.grad_t(&r, &e.scale(HESSIAN_STEP))?;
            let minus = self.grad_t(&r, &e.scale(-HESSIAN_STEP))?;
            hess.push(coords(&(&plus - &minus).scale(0.5 / HESSIAN_STEP), basis)?);
        }
        for i in 0..hess.len() {
            for j in 0..i {
                let avg = 0.5 * (hess[i][j] + hess[j][i]);
                hess[i][j] = avg;
                hess[j][i] = avg;
            }
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let Ok(t) = solve(&hess, &neg_g) else {
            return Ok(None);
        };
        if t.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() >= 0.0 {
            return Ok(None);
        }
        let mut dt = ComplexMatrix::zeros(n, n);
        for (c, e) in t.iter().zip(basis) {
            dt = &dt + &e.scale(*c);
        }
        Ok(Some(r.sandwich(&dt)?))
    }
}

/// Descent (min sense) or ascent (max sense) on the positive-definite cone
/// with a backtracking line search. A step is accepted once the iterate is
/// positive definite and the objective does not get worse beyond rounding.
pub fn optimize_pd(
    vp: &VariationalProblem,
    h_init: &PositiveDefiniteMatrix,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult> {
    let obj = Signed {
        vp,
        sign: match vp.sense {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        },
    };
    let basis = hermitian_basis(vp.dim());
    let mut h = h_init.clone();
    let mut f = obj.value(&h)?;
    let mut prev: Option<(ComplexMatrix, ComplexMatrix)> = None;
    let mut grad_norm = f64::INFINITY;
    let mut grad_scale = 0.0;
    let mut iterations = 0;

    while iterations <= opts.max_iter {
        let (gn, gs) = vp.gradient_norm(&h)?;
        grad_norm = gn;
        grad_scale = gs;
        if gn <= opts.grad_tol * gs {
            return Ok(OptimizeResult {
                h,
                value: obj.sign * f,
                iterations,
                grad_norm,
                grad_scale,
            });
        }
        if iterations == opts.max_iter {
            break;
        }
        let g = obj.grad(&h)?;
        let natural = || h.matrix().sandwich(&g).map(|m| -&m);
        let (dir, mut eta) = match opts.direction {
            StepDirection::Newton => match obj.newton_direction(&h, &basis)? {
                Some(d) => (d, 1.0),
                None => (natural()?, opts.initial_step),
            },
            StepDirection::Gradient => (-&g, opts.initial_step),
            StepDirection::NaturalGradient => (natural()?, opts.initial_step),
        };
        if opts.direction != StepDirection::Newton && opts.step_rule == StepRule::BarzilaiBorwein {
            if let Some((h_prev, d_prev)) = &prev {
                let s = h.matrix() - h_prev;
                let yv = &dir - d_prev;
                let sy = -s.trace_product(&yv)?.re;
                let ss = s.trace_product(&s)?.re;
                if sy > 0.0 && ss > 0.0 {
                    eta = (ss / sy).clamp(1e-12, 1e12);
                }
            }
        }
        let slack = 8.0 * f64::EPSILON * (f.abs() + 1.0);
        let accepted = loop {
            if eta < MIN_STEP {
                break None;
            }
            let trial = h.matrix() + &dir.scale(eta);
            if let Ok(cand) = PositiveDefiniteMatrix::from_hermitian_part(&trial) {
                if let Ok(fc) = obj.value(&cand) {
                    if fc <= f + slack {
                        break Some((cand, fc));
                    }
                }
            }
            eta *= opts.backtrack;
        };
        let Some((cand, fc)) = accepted else {
            break;
        };
        prev = Some((h.matrix().clone(), dir));
        h = cand;
        f = fc;
        iterations += 1;
    }
    Err(Error::NonConvergence {
        iterations,
        grad_norm: grad_norm / grad_scale.max(f64::MIN_POSITIVE),
        best_value: obj.sign * f,
    })
}

/// Seeded random starting point `(GG* + I)/n`.
pub fn random_start(dim: usize, seed: u64) -> Result<PositiveDefiniteMatrix> {
    let g = ginibre(dim, dim, &mut seeded_rng(seed));
    let m = &(&g * &g.adjoint()) + &ComplexMatrix::identity(dim);
    PositiveDefiniteMatrix::from_hermitian_part(&m.scale(1.0 / dim as f64))
}

/// Runs the optimizer from `starts` seeded random points.
pub fn multi_start(
    vp: &VariationalProblem,
    starts: usize,
    seed: u64,
    opts: &OptimizeOptions,
) -> Result<Vec<OptimizeResult>> {
    (0..starts as u64)
        .map(|i| {
            optimize_pd(
                vp,
                &random_start(vp.dim(), seed.wrapping_mul(1000).wrapping_add(i))?,
                opts,
            )
        })
        .collect()
}
