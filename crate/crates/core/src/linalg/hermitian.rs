use num_complex::Complex64;

use super::eigen::{jacobi_eigh, EigenDecomposition};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerances::{HERMIT_TOL, PD_FLOOR, RECON_TOL, SUPPORT_TOL};

/// Square matrix verified Hermitian and stored exactly symmetrized.
///
/// The eigendecomposition, when present, was computed at construction and is
/// never filled in lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    matrix: ComplexMatrix,
    eig: Option<EigenDecomposition>,
}

impl HermitianMatrix {
    /// Checks `‖M − M*‖_F <= HERMIT_TOL · ‖M‖_F` and symmetrizes.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dims(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let norm = m.frobenius_norm();
        let defect = m.hermitian_defect();
        if defect > HERMIT_TOL * norm {
            return Err(Error::NotHermitian(if norm > 0.0 { defect / norm } else { defect }));
        }
        Ok(Self::from_hermitian_part(&m))
    }

    /// Takes the Hermitian part of `m` without checking its asymmetry.
    ///
    /// For products like `A B A` with Hermitian `A`, `B`, which are Hermitian up
    /// to rounding.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        let mut h = m.hermitian_part();
        for i in 0..h.rows() {
            h[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        }
        Self { matrix: h, eig: None }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_hermitian_part(&ComplexMatrix::identity(n))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_hermitian_part(&ComplexMatrix::from_real_diag(diag))
    }

    /// Builds `V diag(λ) V*` with the decomposition cached.
    pub fn from_eigen(eig: EigenDecomposition) -> Self {
        let m = eig.reconstruct();
        let mut h = Self::from_hermitian_part(&m);
        h.eig = Some(eig);
        h
    }

    /// Returns a copy with the eigendecomposition cached, verifying the
    /// reconstruction and unitarity invariants.
    pub fn decomposed(self) -> Result<Self> {
        if self.eig.is_some() {
            return Ok(self);
        }
        let eig = hermitian_eig(&self)?;
        Ok(Self {
            matrix: self.matrix,
            eig: Some(eig),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cached_eig(&self) -> Option<&EigenDecomposition> {
        self.eig.as_ref()
    }

    /// Cached decomposition, or a freshly computed one.
    pub fn eig(&self) -> Result<EigenDecomposition> {
        match &self.eig {
            Some(e) => Ok(e.clone()),
            None => hermitian_eig(self),
        }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Applies `f` to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let eig = self.eig()?;
        Ok(HermitianMatrix::from_hermitian_part(&eig.map(f)))
    }

    /// Power on the support of a positive semidefinite matrix: eigenvalues below
    /// `SUPPORT_TOL · λ_max` (including small negative rounding) map to zero,
    /// the rest to `λ^s`.
    pub fn support_power(&self, s: f64) -> Result<HermitianMatrix> {
        let eig = self.eig()?;
        let cut = SUPPORT_TOL * eig.max().abs().max(f64::MIN_POSITIVE);
        if eig.min() < -cut {
            return Err(Error::NotPositiveDefinite {
                step: "support power of a non-PSD matrix".into(),
                min_eig: eig.min(),
                max_eig: eig.max(),
            });
        }
        Ok(HermitianMatrix::from_hermitian_part(&eig.map(|l| {
            if l <= cut {
                0.0
            } else {
                l.powf(s)
            }
        })))
    }

    /// Number of eigenvalues above the support cut.
    pub fn support_rank(&self) -> Result<usize> {
        let eig = self.eig()?;
        let cut = SUPPORT_TOL * eig.max().abs().max(f64::MIN_POSITIVE);
        Ok(eig.values.iter().filter(|&&l| l > cut).count())
    }

    /// Unitary conjugation `U self U*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::from_hermitian_part(&u.sandwich(&self.matrix)?))
    }
}

/// Hermitian matrix whose spectrum satisfies
/// `λ_min > PD_FLOOR · max(1, λ_max)`; the eigendecomposition is always cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDefiniteMatrix {
    herm: HermitianMatrix,
}

impl PositiveDefiniteMatrix {
    pub fn new(herm: HermitianMatrix) -> Result<Self> {
        let herm = herm.decomposed()?;
        let eig = herm.eig.as_ref().expect("decomposed");
        let (lo, hi) = (eig.min(), eig.max());
        if !(lo > PD_FLOOR * hi.max(1.0)) {
            return Err(Error::NotPositiveDefinite {
                step: "positive-definite check".into(),
                min_eig: lo,
                max_eig: hi,
            });
        }
        Ok(Self { herm })
    }

    /// Checks Hermiticity and positivity of a raw matrix.
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// Takes the Hermitian part of `m` and checks positivity.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::from_hermitian_part(m))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n]).expect("identity is positive definite")
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diag(diag))
    }

    pub fn herm(&self) -> &HermitianMatrix {
        &self.herm
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.herm.matrix()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.herm.into_matrix()
    }

    pub fn dim(&self) -> usize {
        self.herm.dim()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        self.herm.eig.as_ref().expect("positive definite matrices cache eig")
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig().values
    }

    pub fn trace(&self) -> f64 {
        self.herm.trace()
    }

    /// `A^s = V diag(λ^s) V*` for any finite real `s`.
    pub fn power(&self, s: f64) -> Result<PositiveDefiniteMatrix> {
        mat_power(self, s)
    }

    /// Matrix natural logarithm (Hermitian, possibly indefinite).
    pub fn log(&self) -> HermitianMatrix {
        HermitianMatrix::from_hermitian_part(&self.eig().map(f64::ln))
    }

    /// `Tr A^s`, computed from the cached spectrum.
    pub fn trace_power(&self, s: f64) -> f64 {
        self.eigenvalues().iter().map(|l| l.powf(s)).sum()
    }

    pub fn inverse(&self) -> Result<PositiveDefiniteMatrix> {
        self.power(-1.0)
    }

    /// `K self K*`, checked positive definite.
    pub fn congruence(&self, k: &ComplexMatrix) -> Result<PositiveDefiniteMatrix> {
        PositiveDefiniteMatrix::from_hermitian_part(&k.sandwich(self.matrix())?)
    }

    /// `self · other · self`.
    pub fn sandwich(&self, other: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
        let prod = self.matrix().try_mul(other.matrix())?.try_mul(self.matrix())?;
        PositiveDefiniteMatrix::from_hermitian_part(&prod)
    }
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues,
/// verified against the reconstruction and unitarity tolerances.
pub fn hermitian_eig(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let eig = jacobi_eigh(m.matrix())?;
    let norm = m.matrix().frobenius_norm();
    let recon = eig.reconstruct().distance(m.matrix())?;
    let n = m.dim();
    let unit = (&eig.vectors.adjoint() * &eig.vectors).distance(&ComplexMatrix::identity(n))?;
    if recon > RECON_TOL * norm.max(f64::MIN_POSITIVE) || unit > RECON_TOL {
        return Err(Error::EigenNonConvergence {
            sweeps: 0,
            off_norm: recon.max(unit),
        });
    }
    Ok(eig)
}

/// `A^s` via the eigendecomposition; `s = 0` gives the identity exactly.
pub fn mat_power(a: &PositiveDefiniteMatrix, s: f64) -> Result<PositiveDefiniteMatrix> {
    if !s.is_finite() {
        return Err(Error::params(format!("non-finite exponent {s}")));
    }
    if s == 0.0 {
        return Ok(PositiveDefiniteMatrix::identity(a.dim()));
    }
    if s == 1.0 {
        return Ok(a.clone());
    }
    let eig = a.eig();
    let mut out = EigenDecomposition {
        values: eig.values.iter().map(|l| l.powf(s)).collect(),
        vectors: eig.vectors.clone(),
    };
    // negative powers reverse the order
    if s < 0.0 {
        out = reverse(out);
    }
    // The relative floor applies to inputs; a power of a positive definite
    // matrix only needs a representable positive spectrum.
    if !(out.min() > 0.0) || !out.max().is_finite() {
        return Err(Error::NotPositiveDefinite {
            step: format!("power {s}"),
            min_eig: out.min(),
            max_eig: out.max(),
        });
    }
    Ok(PositiveDefiniteMatrix {
        herm: HermitianMatrix::from_eigen(out),
    })
}

fn reverse(eig: EigenDecomposition) -> EigenDecomposition {
    let n = eig.dim();
    let values = eig.values.iter().rev().copied().collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.vectors[(i, n - 1 - j)]);
    EigenDecomposition { values, vectors }
}

/// The two moduli of an invertible matrix.
#[derive(Debug, Clone)]
pub struct Modulus {
    /// `|K| = (K*K)^{1/2}`
    pub abs: PositiveDefiniteMatrix,
    /// `|K*| = (KK*)^{1/2}`
    pub abs_adjoint: PositiveDefiniteMatrix,
}

/// Gram matrix `K*K` of an invertible matrix, checked against the
/// singular-value floor `σ_min > PD_FLOOR · σ_max`.
pub fn gram(k: &ComplexMatrix) -> Result<PositiveDefiniteMatrix> {
    gram_checked(&k.adjoint().try_mul(k)?)
}

/// `KK*` with the same check.
pub fn gram_adjoint(k: &ComplexMatrix) -> Result<PositiveDefiniteMatrix> {
    gram_checked(&k.try_mul(&k.adjoint())?)
}

fn gram_checked(g: &ComplexMatrix) -> Result<PositiveDefiniteMatrix> {
    if !g.is_square() {
        return Err(Error::dims("modulus needs a square matrix"));
    }
    let h = HermitianMatrix::from_hermitian_part(g).decomposed()?;
    let eig = h.cached_eig().expect("decomposed");
    let ratio = eig.min().max(0.0).sqrt() / eig.max().max(f64::MIN_POSITIVE).sqrt();
    if !(ratio > PD_FLOOR) {
        return Err(Error::Singular(ratio));
    }
    Ok(PositiveDefiniteMatrix { herm: h })
}

/// `|K| = (K*K)^{1/2}` and `|K*| = (KK*)^{1/2}`.
pub fn modulus(k: &ComplexMatrix) -> Result<Modulus> {
    Ok(Modulus {
        abs: gram(k)?.power(0.5)?,
        abs_adjoint: gram_adjoint(k)?.power(0.5)?,
    })
}

/// Residual `‖|K*|^{2s} − K |K|^{2(s−1)} K*‖_F` of the modulus power identity.
pub fn modulus_identity_residual(k: &ComplexMatrix, s: f64) -> Result<f64> {
    let lhs = gram_adjoint(k)?.power(s)?;
    let inner = gram(k)?.power(s - 1.0)?;
    let rhs = k.sandwich(inner.matrix())?;
    lhs.matrix().distance(&rhs)
}

/// Both sides of the modulus power identity, for relative residuals.
pub fn modulus_identity_sides(k: &ComplexMatrix, s: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let lhs = gram_adjoint(k)?.power(s)?;
    let inner = gram(k)?.power(s - 1.0)?;
    let rhs = k.sandwich(inner.matrix())?;
    Ok((lhs.into_matrix(), rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_square_root() {
        let a = PositiveDefiniteMatrix::from_real_diag(&[4.0, 9.0]).unwrap();
        let r = a.power(0.5).unwrap();
        let want = ComplexMatrix::from_real_diag(&[2.0, 3.0]);
        assert!(r.matrix().distance(&want).unwrap() < 1e-15);
    }

    #[test]
    fn zero_power_is_identity() {
        let a = PositiveDefiniteMatrix::from_real_diag(&[4.0, 0.5, 7.0]).unwrap();
        assert_eq!(a.power(0.0).unwrap().matrix(), &ComplexMatrix::identity(3));
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        assert!(matches!(
            PositiveDefiniteMatrix::from_real_diag(&[1.0, -1.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            PositiveDefiniteMatrix::from_real_diag(&[1.0, 1e-14]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn symmetrizes_small_defects() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 1e-13), c(0.5, 0.0), c(0.5, 1e-13), c(2.0, 0.0)]).unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.matrix().hermitian_defect(), 0.0);
        assert_eq!(h.matrix()[(0, 0)].im, 0.0);
    }

    #[test]
    fn modulus_of_scalar_and_unitary() {
        let k = ComplexMatrix::new(1, 1, vec![c(-2.0, 0.0)]).unwrap();
        let m = modulus(&k).unwrap();
        assert!((m.abs.matrix()[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::new(2, 2, vec![c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]).unwrap();
        let m = modulus(&u).unwrap();
        assert!(m.abs.matrix().distance(&ComplexMatrix::identity(2)).unwrap() < 1e-14);
        assert!(m.abs_adjoint.matrix().distance(&ComplexMatrix::identity(2)).unwrap() < 1e-14);
    }

    #[test]
    fn modulus_squared_is_gram() {
        // K = [[1,1],[0,1]] ⇒ K*K = [[1,1],[1,2]] by direct multiplication
        let k = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let m = modulus(&k).unwrap();
        let sq = m.abs.matrix() * m.abs.matrix();
        let want = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!(sq.distance(&want).unwrap() < 1e-14);
    }

    #[test]
    fn singular_modulus_rejected() {
        let k = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(modulus(&k), Err(Error::Singular(_))));
    }

    #[test]
    fn modulus_identity_trivial_cases() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(0.0, s), c(0.0, -s)]).unwrap();
        for p in [-1.5, 0.3, 2.4] {
            assert!(modulus_identity_residual(&u, p).unwrap() < 1e-14);
        }
        let k = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(modulus_identity_residual(&k, 2.0).unwrap() < 1e-12);
    }

    #[test]
    fn support_power_zeroes_kernel() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 4.0, 1e-18]);
        let p = h.support_power(-0.5).unwrap();
        let want = ComplexMatrix::from_real_diag(&[0.0, 0.5, 0.0]);
        assert!(p.matrix().distance(&want).unwrap() < 1e-15);
        assert_eq!(h.support_rank().unwrap(), 1);
    }
}
