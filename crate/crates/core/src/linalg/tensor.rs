//! Kronecker products and partial traces.
//!
//! Tensor factors are ordered left to right: factor 0 is the leftmost slot
//! and the most significant digit of the flattened index.

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::dims("empty tensor product"))?;
    Ok(rest.iter().fold((*first).clone(), |acc, f| kron(&acc, f)))
}

/// Splits a flat index into per-factor digits.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

/// Traces out the factors listed in `traced` from a square matrix on
/// `⊗_k C^{dims[k]}`. The remaining factors keep their relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], traced: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total || dims.is_empty() || dims.contains(&0) {
        return Err(Error::dims(format!(
            "matrix {}x{} does not live on factors {dims:?}",
            m.rows(),
            m.cols()
        )));
    }
    let mut is_traced = vec![false; dims.len()];
    for &t in traced {
        if t >= dims.len() || is_traced[t] {
            return Err(Error::dims(format!("bad traced factor list {traced:?} for {dims:?}")));
        }
        is_traced[t] = true;
    }
    let kept: Vec<usize> = (0..dims.len()).filter(|&k| !is_traced[k]).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    for i in 0..total {
        digits(i, dims, &mut di);
        let oi = kept.iter().fold(0, |acc, &k| acc * dims[k] + di[k]);
        for j in 0..total {
            digits(j, dims, &mut dj);
            if (0..dims.len()).any(|k| is_traced[k] && di[k] != dj[k]) {
                continue;
            }
            let oj = kept.iter().fold(0, |acc, &k| acc * dims[k] + dj[k]);
            let v = m[(i, j)];
            if v != ZERO {
                out[(oi, oj)] += v;
            }
        }
    }
    Ok(out)
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_factors(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total || perm.len() != dims.len() {
        return Err(Error::dims("permutation does not match factor dimensions"));
    }
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::dims(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let map = |index: usize| {
        let mut d = vec![0; dims.len()];
        digits(index, dims, &mut d);
        perm.iter().fold(0, |acc, &p| acc * dims[p] + d[p])
    };
    let targets: Vec<usize> = (0..total).map(map).collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(targets[i], targets[j])] = m[(i, j)];
        }
    }
    debug_assert_eq!(new_dims.iter().product::<usize>(), total);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(rows: usize, seed: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, rows, |i, j| {
            c(
                (i as f64 + 1.3 * j as f64 + seed).sin(),
                (seed * i as f64 - j as f64).cos(),
            )
        })
    }

    #[test]
    fn identity_kron_identity() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn diagonal_kron() {
        let k = kron(
            &ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            &ComplexMatrix::from_real_diag(&[3.0, 4.0]),
        );
        assert_eq!(k, ComplexMatrix::from_real_diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn trace_out_second_factor() {
        let a = sample(2, 0.4);
        let b = sample(3, 1.7);
        let ab = kron(&a, &b);
        let got = partial_trace(&ab, &[2, 3], &[1]).unwrap();
        let want = a.scale_complex(b.trace());
        assert!(got.distance(&want).unwrap() < 1e-14);
    }

    #[test]
    fn trace_out_first_two_of_three() {
        let (a, b, cc) = (sample(2, 0.1), sample(2, 0.9), sample(3, 2.2));
        let abc = kron_all(&[&a, &b, &cc]).unwrap();
        let got = partial_trace(&abc, &[2, 2, 3], &[0, 1]).unwrap();
        let want = cc.scale_complex(a.trace() * b.trace());
        assert!(got.distance(&want).unwrap() < 1e-13);
    }

    #[test]
    fn bell_state_marginal() {
        // |Φ+> = (|00> + |11>)/√2, explicit index summation gives I/2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(s, 0.0), ZERO, ZERO, c(s, 0.0)];
        let rho = ComplexMatrix::outer(&psi, &psi);
        let red = partial_trace(&rho, &[2, 2], &[1]).unwrap();
        assert!(red.distance(&ComplexMatrix::identity(2).scale(0.5)).unwrap() < 1e-15);
        let red0 = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert!(red0.distance(&ComplexMatrix::identity(2).scale(0.5)).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[0, 0]).is_err());
    }

    #[test]
    fn permute_swaps_kron_order() {
        let a = sample(2, 0.3);
        let b = sample(3, 0.8);
        let swapped = permute_factors(&kron(&a, &b), &[2, 3], &[1, 0]).unwrap();
        assert!(swapped.distance(&kron(&b, &a)).unwrap() < 1e-15);
    }
}
