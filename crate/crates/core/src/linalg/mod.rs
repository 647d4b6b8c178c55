//! Dense complex linear algebra and Hermitian functional calculus.

mod codec;
mod eigen;
mod hermitian;
mod matrix;
mod tensor;

pub use codec::{format_f64, matrix_from_json, matrix_from_value, matrix_to_json};
pub use eigen::{jacobi_eigh, EigenDecomposition};
pub use hermitian::{
    gram, gram_adjoint, hermitian_eig, mat_power, modulus, modulus_identity_residual, modulus_identity_sides,
    HermitianMatrix, Modulus, PositiveDefiniteMatrix,
};
pub use matrix::ComplexMatrix;
pub use tensor::{kron, kron_all, partial_trace, permute_factors};

pub use num_complex::Complex64;

/// `‖a − b‖_F / max(‖a‖_F, ‖b‖_F)`, zero when both vanish.
pub fn relative_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<f64> {
    let d = a.distance(b)?;
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    Ok(if scale > 0.0 { d / scale } else { d })
}
