use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, ComplexMatrix, HermitianMatrix};
use crate::tolerances::UNITARY_TOL;

use super::channel::QuantumChannel;
use super::random::{ginibre, orthonormalize_columns, seeded_rng};
use super::state::PureState;

const COMPLETION_SEED: u64 = 0x5eed_d11a;
const COMPLETION_ATTEMPTS: u64 = 8;

/// Unitary `U` on `H ⊗ H' ⊗ K` and pure `δ = |0><0|` on `H' ⊗ K` with
/// `E(ω) = Tr_{12} U(ω ⊗ δ)U*`.
///
/// `H'` has dimension `⌈m/n⌉` for `m` Kraus operators on an `n`-dimensional
/// input, so `H ⊗ H'` holds one basis vector per Kraus operator (extra slots
/// carry zero Kraus operators). Basis index of `|i, e, o>` is `(i·n' + e)·k + o`.
#[derive(Debug, Clone)]
pub struct StinespringDilation {
    dim_in: usize,
    env_dim: usize,
    dim_out: usize,
    unitary: ComplexMatrix,
    env_state: PureState,
}

impl StinespringDilation {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    /// Dimension of `H'`.
    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Dimension `d` of `H ⊗ H'`.
    pub fn group_dim(&self) -> usize {
        self.dim_in * self.env_dim
    }

    pub fn total_dim(&self) -> usize {
        self.group_dim() * self.dim_out
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn env_state(&self) -> &PureState {
        &self.env_state
    }

    /// `‖U*U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.unitary.adjoint() * &self.unitary)
            .distance(&ComplexMatrix::identity(self.total_dim()))
            .expect("square")
    }

    /// `U(ω ⊗ δ)U*`.
    pub fn lift(&self, omega: &ComplexMatrix) -> Result<ComplexMatrix> {
        if omega.rows() != self.dim_in || omega.cols() != self.dim_in {
            return Err(Error::dims("dilation input dimension"));
        }
        self.unitary.sandwich(&kron(omega, self.env_state.matrix()))
    }

    /// `U(x ⊗ 1_{H'⊗K})U*`.
    pub fn lift_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::dims("dilation input dimension"));
        }
        let id = ComplexMatrix::identity(self.env_dim * self.dim_out);
        self.unitary.sandwich(&kron(x, &id))
    }

    /// `Tr_{12} U(ω ⊗ δ)U*`.
    pub fn apply(&self, omega: &ComplexMatrix) -> Result<ComplexMatrix> {
        let big = self.lift(omega)?;
        partial_trace(&big, &[self.dim_in, self.env_dim, self.dim_out], &[0, 1])
    }

    /// `Tr_{23}[U*(1_{H⊗H'} ⊗ y)U(1_H ⊗ δ)]`, the adjoint channel read off the
    /// dilation.
    pub fn apply_adjoint(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.dim_out || y.cols() != self.dim_out {
            return Err(Error::dims("dilation adjoint input dimension"));
        }
        let lifted_y = kron(&ComplexMatrix::identity(self.group_dim()), y);
        let lifted_delta = kron(&ComplexMatrix::identity(self.dim_in), self.env_state.matrix());
        let prod = &(&(&self.unitary.adjoint() * &lifted_y) * &self.unitary) * &lifted_delta;
        partial_trace(&prod, &[self.dim_in, self.env_dim, self.dim_out], &[1, 2])
    }

    /// `‖E(ω) − Tr_{12} U(ω ⊗ δ)U*‖_F`.
    pub fn reproduction_residual(&self, channel: &QuantumChannel, omega: &HermitianMatrix) -> Result<f64> {
        self.apply(omega.matrix())?
            .distance(&channel.apply_matrix(omega.matrix())?)
    }
}

/// Builds a dilation of `channel`. The columns `U|i, 0, 0>` are fixed by the
/// Kraus operators; the rest of `U` is completed by Gram–Schmidt over seeded
/// Gaussian vectors, retrying with a new seed if the completion degenerates.
pub fn stinespring_dilate(channel: &QuantumChannel) -> Result<StinespringDilation> {
    let n = channel.dim_in();
    let k = channel.dim_out();
    let m = channel.kraus().len();
    let env_dim = m.div_ceil(n);
    let d = n * env_dim;
    let total = d * k;
    let block = env_dim * k;

    let mut fixed = ComplexMatrix::zeros(total, n);
    for (j, e) in channel.kraus().iter().enumerate() {
        for i in 0..n {
            for o in 0..k {
                fixed[(j * k + o, i)] = e[(o, i)];
            }
        }
    }

    let env_state = PureState::basis(block, 0)?;
    let mut last_defect = f64::NAN;
    for attempt in 0..COMPLETION_ATTEMPTS {
        let mut rng = seeded_rng(COMPLETION_SEED.wrapping_add(attempt));
        let fill = ginibre(total, total - n, &mut rng);
        let candidate = ComplexMatrix::from_fn(
            total,
            total,
            |r, c| {
                if c < n {
                    fixed[(r, c)]
                } else {
                    fill[(r, c - n)]
                }
            },
        );
        let Some(q) = orthonormalize_columns(&candidate) else {
            continue;
        };
        let mut unitary = ComplexMatrix::zeros(total, total);
        let mut next = n;
        for col in 0..total {
            let src = if col % block == 0 {
                col / block
            } else {
                let s = next;
                next += 1;
                s
            };
            unitary.set_column(col, &q.column(src));
        }
        let dilation = StinespringDilation {
            dim_in: n,
            env_dim,
            dim_out: k,
            unitary,
            env_state: env_state.clone(),
        };
        last_defect = dilation.unitarity_defect();
        if last_defect <= UNITARY_TOL {
            return Ok(dilation);
        }
    }
    Err(Error::CompletionFailure(format!(
        "no unitary completion after {COMPLETION_ATTEMPTS} attempts (last defect {last_defect:.3e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_channel, partial_trace_channel, random_cptp, random_state, ChannelSpec};

    #[test]
    fn unitary_channel_has_trivial_environment() {
        let e = make_channel(&ChannelSpec::RandomUnitary { dim: 3, seed: 4 }).unwrap();
        let dil = stinespring_dilate(&e).unwrap();
        assert_eq!(dil.env_dim(), 1);
        let rho = random_state(3, 8).unwrap();
        assert!(dil.reproduction_residual(&e, rho.herm()).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_dilation() {
        let e = partial_trace_channel(&[2, 2], &[1]).unwrap();
        let dil = stinespring_dilate(&e).unwrap();
        for seed in 0..20 {
            let rho = random_state(4, seed).unwrap();
            assert!(dil.reproduction_residual(&e, rho.herm()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn random_channel_dilation() {
        let e = random_cptp(2, 2, 3, 11).unwrap();
        let dil = stinespring_dilate(&e).unwrap();
        assert_eq!(dil.env_dim(), 2);
        assert!(dil.unitarity_defect() < 1e-10);
        let rho = random_state(2, 3).unwrap();
        assert!(dil.reproduction_residual(&e, rho.herm()).unwrap() < 1e-9);
    }

    #[test]
    fn adjoint_from_dilation_matches_kraus_adjoint() {
        let e = random_cptp(3, 2, 4, 1).unwrap();
        let dil = stinespring_dilate(&e).unwrap();
        let y = random_state(2, 9).unwrap();
        let via_dilation = dil.apply_adjoint(y.matrix()).unwrap();
        let via_kraus = e.adjoint().apply_matrix(y.matrix()).unwrap();
        assert!(via_dilation.distance(&via_kraus).unwrap() < 1e-12);
    }
}
