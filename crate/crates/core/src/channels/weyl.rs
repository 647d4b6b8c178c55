use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{kron, Complex64, ComplexMatrix, HermitianMatrix};
use crate::tolerances::{MAX_TWIRL_DIM, STATE_TRACE_TOL};

use super::channel::QuantumChannel;
use super::dilation::stinespring_dilate;
use super::state::QuantumState;

/// Element `U_{k,l} = Σ_r η^{rl} |k+r><r|` of the discrete Heisenberg–Weyl
/// group, `η = e^{2πi/d}`. Labels `k, l, r` run over `1..=d`; label `r` is
/// stored at basis index `r − 1` and the ket label `k + r` is taken mod `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylOperator {
    pub k: usize,
    pub l: usize,
    pub matrix: ComplexMatrix,
}

impl WeylOperator {
    pub fn is_identity(&self) -> bool {
        let d = self.matrix.rows();
        self.k == d && self.l == d
    }
}

/// All `d²` operators, ordered with `k` major and `l` minor.
pub fn heisenberg_weyl(d: usize) -> Vec<WeylOperator> {
    let mut out = Vec::with_capacity(d * d);
    for k in 1..=d {
        for l in 1..=d {
            let mut m = ComplexMatrix::zeros(d, d);
            for r in 1..=d {
                let phase = 2.0 * PI * ((r * l) % d) as f64 / d as f64;
                m[((k + r - 1) % d, r - 1)] = Complex64::from_polar(1.0, phase);
            }
            out.push(WeylOperator { k, l, matrix: m });
        }
    }
    out
}

/// `(1/d²) Σ_{k,l} U_{k,l} ρ U_{k,l}*`, which equals `I/d` for trace-one `ρ`.
pub fn twirl(rho: &HermitianMatrix, d: usize) -> Result<HermitianMatrix> {
    if rho.dim() != d || d == 0 {
        return Err(Error::dims(format!(
            "twirl over dimension {d} got a {}x{0} input",
            rho.dim()
        )));
    }
    let tr = rho.trace();
    if !((tr - 1.0).abs() <= STATE_TRACE_TOL * 1e2) {
        return Err(Error::InvalidState(format!("twirl input has trace {tr}")));
    }
    let mut sum = ComplexMatrix::zeros(d, d);
    for w in heisenberg_weyl(d) {
        sum = &sum + &w.matrix.sandwich(rho.matrix())?;
    }
    Ok(HermitianMatrix::from_hermitian_part(&sum.scale(1.0 / (d * d) as f64)))
}

/// The operators `V_j`, `W_j` obtained by rotating the dilated states with
/// the Heisenberg–Weyl group of `H ⊗ H'`.
#[derive(Debug, Clone)]
pub struct TwirledDecomposition {
    /// Dimension of `H ⊗ H'`.
    pub d: usize,
    pub dim_out: usize,
    /// `(u_j ⊗ 1) U (ρ ⊗ δ) U* (u_j* ⊗ 1)`.
    pub v: Vec<HermitianMatrix>,
    /// `(u_j ⊗ 1) U (σ ⊗ δ) U* (u_j* ⊗ 1)`.
    pub w: Vec<HermitianMatrix>,
    /// The group elements `u_j ⊗ 1_K`, in the same order.
    pub rotations: Vec<ComplexMatrix>,
    pub dilation: super::dilation::StinespringDilation,
}

impl TwirledDecomposition {
    /// `‖(1/d²)Σ V_j − (I/d) ⊗ E(ρ)‖_F` and the same for `W_j`, `σ`.
    pub fn averaging_residuals(
        &self,
        channel: &QuantumChannel,
        rho: &QuantumState,
        sigma: &QuantumState,
    ) -> Result<(f64, f64)> {
        let n = self.v.len() as f64;
        let lifted = |m: &ComplexMatrix| kron(&ComplexMatrix::identity(self.d).scale(1.0 / self.d as f64), m);
        let avg = |ops: &[HermitianMatrix]| {
            ops.iter()
                .fold(
                    ComplexMatrix::zeros(self.d * self.dim_out, self.d * self.dim_out),
                    |acc, o| &acc + o.matrix(),
                )
                .scale(1.0 / n)
        };
        let er = lifted(&channel.apply_matrix(rho.matrix())?);
        let es = lifted(&channel.apply_matrix(sigma.matrix())?);
        Ok((avg(&self.v).distance(&er)?, avg(&self.w).distance(&es)?))
    }
}

/// Dilates `E` and returns the `d²` operators `V_j`, `W_j` on `H ⊗ H' ⊗ K`.
pub fn twirled_decomposition(
    channel: &QuantumChannel,
    rho: &QuantumState,
    sigma: &QuantumState,
) -> Result<TwirledDecomposition> {
    if rho.dim() != channel.dim_in() || sigma.dim() != channel.dim_in() {
        return Err(Error::dims("states do not match the channel input"));
    }
    let dilation = stinespring_dilate(channel)?;
    let d = dilation.group_dim();
    if d > MAX_TWIRL_DIM {
        return Err(Error::params(format!(
            "twirling group dimension {d} exceeds the limit {MAX_TWIRL_DIM}"
        )));
    }
    let k = channel.dim_out();
    let rho_big = dilation.lift(rho.matrix())?;
    let sigma_big = dilation.lift(sigma.matrix())?;
    let id_k = ComplexMatrix::identity(k);
    let rotations: Vec<ComplexMatrix> = heisenberg_weyl(d).iter().map(|w| kron(&w.matrix, &id_k)).collect();
    let mut v = Vec::with_capacity(d * d);
    let mut w = Vec::with_capacity(d * d);
    for r in &rotations {
        v.push(HermitianMatrix::from_hermitian_part(&r.sandwich(&rho_big)?));
        w.push(HermitianMatrix::from_hermitian_part(&r.sandwich(&sigma_big)?));
    }
    Ok(TwirledDecomposition {
        d,
        dim_out: k,
        v,
        w,
        rotations,
        dilation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{identity_channel, random_cptp, random_state};

    #[test]
    fn last_element_is_identity() {
        for d in 1..=5 {
            let ops = heisenberg_weyl(d);
            assert_eq!(ops.len(), d * d);
            let last = ops.last().unwrap();
            assert!(last.is_identity());
            assert!(last.matrix.distance(&ComplexMatrix::identity(d)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn shift_with_signs_for_d2() {
        // U_{1,2} = Σ_r (−1)^{2r} |1+r><r| : |2><1| + |1><2| (labels), phases all +1
        // U_{1,1} = Σ_r (−1)^r |1+r><r| : −|2><1| + |1><2|
        let ops = heisenberg_weyl(2);
        let u12 = &ops[1];
        assert_eq!((u12.k, u12.l), (1, 2));
        let want = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!(u12.matrix.distance(&want).unwrap() < 1e-15);
        let u11 = &ops[0];
        let want = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        assert!(u11.matrix.distance(&want).unwrap() < 1e-15);
        for op in &ops {
            let r = (&op.matrix.adjoint() * &op.matrix)
                .distance(&ComplexMatrix::identity(2))
                .unwrap();
            assert!(r <= 1e-15);
        }
    }

    #[test]
    fn elements_are_distinct() {
        for d in 2..=4 {
            let ops = heisenberg_weyl(d);
            for i in 0..ops.len() {
                for j in i + 1..ops.len() {
                    assert!(ops[i].matrix.distance(&ops[j].matrix).unwrap() > 0.5);
                }
            }
        }
    }

    #[test]
    fn twirl_of_pure_state() {
        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let out = twirl(&HermitianMatrix::new(p).unwrap(), 2).unwrap();
        assert!(out.matrix().distance(&ComplexMatrix::identity(2).scale(0.5)).unwrap() < 1e-15);
    }

    #[test]
    fn twirl_random_state() {
        let rho = random_state(3, 12).unwrap();
        let out = twirl(rho.herm(), 3).unwrap();
        assert!(
            out.matrix()
                .distance(&ComplexMatrix::identity(3).scale(1.0 / 3.0))
                .unwrap()
                < 1e-11
        );
        assert!(twirl(rho.herm(), 2).is_err());
    }

    #[test]
    fn decomposition_for_identity_channel() {
        let e = identity_channel(2).unwrap();
        let rho = random_state(2, 1).unwrap();
        let sigma = random_state(2, 2).unwrap();
        let t = twirled_decomposition(&e, &rho, &sigma).unwrap();
        assert_eq!(t.d, 2);
        let (a, b) = t.averaging_residuals(&e, &rho, &sigma).unwrap();
        assert!(a < 1e-12 && b < 1e-12);
    }

    #[test]
    fn decomposition_preserves_spectrum() {
        let e = random_cptp(2, 2, 3, 5).unwrap();
        let rho = random_state(2, 6).unwrap();
        let sigma = random_state(2, 7).unwrap();
        let t = twirled_decomposition(&e, &rho, &sigma).unwrap();
        let (a, b) = t.averaging_residuals(&e, &rho, &sigma).unwrap();
        assert!(a < 1e-9 && b < 1e-9);
        let base = t.dilation.lift(rho.matrix()).unwrap();
        let want = HermitianMatrix::new(base).unwrap().eig().unwrap().values;
        for vj in &t.v {
            let got = vj.eig().unwrap().values;
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-10);
            }
        }
    }
}
