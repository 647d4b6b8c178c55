//! Seeded random matrices. Every generator takes an explicit RNG so results
//! are reproducible from a `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Complex64, ComplexMatrix, HermitianMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = ginibre(dim, dim, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&ginibre(dim, dim, rng))
}

/// Modified Gram–Schmidt (two passes) on the columns of `m`, with the phase
/// convention `R_jj > 0`. Returns `None` if a column is numerically dependent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q = ComplexMatrix::zeros(rows, cols);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let original = m.column(j);
        let norm0 = norm(&original);
        let mut v = original.clone();
        for _ in 0..2 {
            for b in &basis {
                let overlap = inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let n = norm(&v);
        if !(n > 1e-8 * norm0.max(f64::MIN_POSITIVE)) {
            return None;
        }
        // phase convention: <q_j, original_j> real positive
        let overlap = inner(&v, &original);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for vi in v.iter_mut() {
            *vi = *vi * phase / n;
        }
        q.set_column(j, &v);
        basis.push(v);
    }
    Some(q)
}

/// `<a, b> = Σ conj(a_i) b_i`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded_rng(3);
        for d in 1..6 {
            let u = random_unitary(d, &mut rng);
            let err = (&u.adjoint() * &u).distance(&ComplexMatrix::identity(d)).unwrap();
            assert!(err < 1e-13, "d={d} err={err}");
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let a = ginibre(3, 2, &mut seeded_rng(42));
        let b = ginibre(3, 2, &mut seeded_rng(42));
        assert_eq!(a, b);
    }
}
