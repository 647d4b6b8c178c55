use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix};
use crate::tolerances::STATE_TRACE_TOL;

use super::random::{ginibre, seeded_rng};

/// Weight of `I/d` mixed into generated states.
const MIXING_WEIGHT: f64 = 1e-3;

/// Faithful density matrix: positive definite with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    matrix: PositiveDefiniteMatrix,
}

impl QuantumState {
    /// Validates a density matrix. The trace must be 1 within
    /// `STATE_TRACE_TOL`; it is then renormalized exactly.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let herm = HermitianMatrix::new(m)?;
        Self::from_hermitian(herm)
    }

    pub fn from_hermitian(herm: HermitianMatrix) -> Result<Self> {
        let tr = herm.trace();
        if !((tr - 1.0).abs() <= STATE_TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Self::normalized(herm)
    }

    /// Divides by the trace and checks faithfulness.
    pub fn normalized(herm: HermitianMatrix) -> Result<Self> {
        let tr = herm.trace();
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("non-positive trace {tr}")));
        }
        let scaled = HermitianMatrix::from_hermitian_part(&herm.matrix().scale(1.0 / tr));
        let matrix = PositiveDefiniteMatrix::new(scaled)
            .map_err(|e| Error::InvalidState(format!("state is not faithful: {e}")))?;
        Ok(Self { matrix })
    }

    /// Diagonal state from a strictly positive probability vector.
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidState(format!(
                "probabilities must be strictly positive: {probs:?}"
            )));
        }
        Self::from_hermitian(HermitianMatrix::from_real_diag(probs))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::normalized(HermitianMatrix::identity(dim)).expect("I/d is faithful")
    }

    pub fn pd(&self) -> &PositiveDefiniteMatrix {
        &self.matrix
    }

    pub fn herm(&self) -> &HermitianMatrix {
        self.matrix.herm()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn power(&self, s: f64) -> Result<PositiveDefiniteMatrix> {
        self.matrix.power(s)
    }

    /// `U ρ U*` for unitary `U`.
    pub fn rotate(&self, u: &ComplexMatrix) -> Result<QuantumState> {
        Self::normalized(self.herm().conjugate_by(u)?)
    }
}

/// Pure state `|ψ><ψ|`, used for the environment of a dilation. It is rank
/// one, so it carries no faithfulness guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: Vec<Complex64>,
    matrix: ComplexMatrix,
}

impl PureState {
    pub fn new(vector: Vec<Complex64>) -> Result<Self> {
        let n = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vector.is_empty() || !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState("pure state needs a non-zero vector".into()));
        }
        let vector: Vec<Complex64> = vector.iter().map(|z| z / n).collect();
        let matrix = ComplexMatrix::outer(&vector, &vector);
        Ok(Self { vector, matrix })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::params(format!("basis index {index} out of range {dim}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }
}

/// Seeded faithful state `(1 − w)·GG*/Tr(GG*) + w·I/d` with `w = 1e-3`, so
/// every eigenvalue is at least `1e-3/d`.
pub fn random_state(dim: usize, seed: u64) -> Result<QuantumState> {
    if dim == 0 {
        return Err(Error::params("state dimension must be at least 1"));
    }
    let mut rng = seeded_rng(seed);
    let g = ginibre(dim, dim, &mut rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let mixed = ComplexMatrix::from_fn(dim, dim, |i, j| {
        let base = gg[(i, j)] * ((1.0 - MIXING_WEIGHT) / tr);
        if i == j {
            base + MIXING_WEIGHT / dim as f64
        } else {
            base
        }
    });
    QuantumState::normalized(HermitianMatrix::from_hermitian_part(&mixed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_state() {
        let s = random_state(1, 9).unwrap();
        assert!((s.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_guarantees() {
        for dim in 1..=6 {
            for seed in 0..20 {
                let s = random_state(dim, seed).unwrap();
                assert!((s.herm().trace() - 1.0).abs() < 1e-14);
                assert!(s.pd().eig().min() > 1e-4 / dim as f64);
            }
        }
    }

    #[test]
    fn reproducible() {
        assert_eq!(random_state(3, 5).unwrap(), random_state(3, 5).unwrap());
        assert_ne!(random_state(3, 5).unwrap(), random_state(3, 6).unwrap());
    }

    #[test]
    fn trace_must_be_one() {
        let m = ComplexMatrix::from_real_diag(&[0.5, 0.6]);
        assert!(matches!(QuantumState::new(m), Err(Error::InvalidState(_))));
        let m = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(QuantumState::new(m).is_err());
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let m = ComplexMatrix::from_real_diag(&[0.5 + 4e-13, 0.5]);
        let s = QuantumState::new(m).unwrap();
        assert!((s.herm().trace() - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn pure_state_is_normalized() {
        let p = PureState::new(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
        assert!((p.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!(PureState::basis(2, 2).is_err());
    }
}
