use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    kron, matrix_from_value, partial_trace, Complex64, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix,
};
use crate::tolerances::{CHANNEL_CP_TOL, CHANNEL_TP_TOL};

use super::random::{ginibre, random_unitary, seeded_rng};
use super::state::QuantumState;
use super::weyl::heisenberg_weyl;

/// Completely positive trace-preserving map in Kraus form,
/// `E(ω) = Σ_k E_k ω E_k*` with each `E_k` of shape `dim_out × dim_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl QuantumChannel {
    /// Validates trace preservation and complete positivity at the default
    /// tolerances.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, CHANNEL_TP_TOL)
    }

    /// As [`QuantumChannel::new`] with a custom trace-preservation tolerance
    /// (also used as the Choi positivity slack).
    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != dim_out || k.cols() != dim_in) {
            return Err(Error::InvalidChannel("Kraus operators differ in shape".into()));
        }
        let ch = Self { kraus, dim_in, dim_out };
        let tp = ch.trace_preservation_defect();
        if !(tp <= tol) {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving: ‖Σ E_k*E_k − I‖_F = {tp:.3e}"
            )));
        }
        let min_eig = ch.choi().eig()?.min();
        if min_eig < -tol.max(CHANNEL_CP_TOL) {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix has eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(ch)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `‖Σ_k E_k* E_k − I‖_F`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.dim_in, self.dim_in), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        sum.distance(&ComplexMatrix::identity(self.dim_in))
            .expect("square by construction")
    }

    /// `Σ_k E_k X E_k*` for any `dim_in × dim_in` matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::dims(format!(
                "channel input is {0}x{0}, got {1}x{2}",
                self.dim_in,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &k.sandwich(x)?;
        }
        Ok(out)
    }

    pub fn apply(&self, omega: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::from_hermitian_part(
            &self.apply_matrix(omega.matrix())?,
        ))
    }

    /// Image of a faithful state; fails with `ImageNotFaithful` if the output
    /// drops below the positive-definite floor.
    pub fn apply_state(&self, rho: &QuantumState) -> Result<QuantumState> {
        let out = self.apply(rho.herm())?;
        QuantumState::normalized(out).map_err(|e| Error::ImageNotFaithful(e.to_string()))
    }

    /// Image of a positive definite matrix, required to stay positive definite.
    pub fn apply_pd(&self, a: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
        let out = self.apply(a.herm())?;
        PositiveDefiniteMatrix::new(out).map_err(|e| Error::ImageNotFaithful(e.to_string()))
    }

    /// Hilbert–Schmidt adjoint `E†(Y) = Σ_k E_k* Y E_k`.
    pub fn adjoint(&self) -> AdjointMap {
        AdjointMap {
            kraus: self.kraus.iter().map(ComplexMatrix::adjoint).collect(),
            dim_in: self.dim_out,
            dim_out: self.dim_in,
        }
    }

    /// Choi matrix `Σ_{ij} |i><j| ⊗ E(|i><j|)` on input ⊗ output.
    pub fn choi(&self) -> HermitianMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        let mut choi = ComplexMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let mut eij = ComplexMatrix::zeros(n, n);
                eij[(i, j)] = Complex64::new(1.0, 0.0);
                let block = self.apply_matrix(&eij).expect("shape checked");
                for a in 0..m {
                    for b in 0..m {
                        choi[(i * m + a, j * m + b)] = block[(a, b)];
                    }
                }
            }
        }
        HermitianMatrix::from_hermitian_part(&choi)
    }

    /// `E(X) = Tr_in[(Xᵀ ⊗ I) C]`, an application route independent of the
    /// Kraus sum.
    pub fn apply_via_choi(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::dims("channel input shape"));
        }
        let lifted = kron(&x.transpose(), &ComplexMatrix::identity(self.dim_out));
        let prod = lifted.try_mul(self.choi().matrix())?;
        partial_trace(&prod, &[self.dim_in, self.dim_out], &[0])
    }

    /// Writes `{"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}`.
    pub fn to_json(&self) -> String {
        let kraus: Vec<String> = self.kraus.iter().map(crate::linalg::matrix_to_json).collect();
        format!(
            "{{\"dim_in\":{},\"dim_out\":{},\"kraus\":[{}]}}",
            self.dim_in,
            self.dim_out,
            kraus.join(",")
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Codec(e.to_string()))?;
        let field = |name: &str| {
            value
                .get(name)
                .and_then(serde_json::Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::Codec(format!("missing `{name}`")))
        };
        let (dim_in, dim_out) = (field("dim_in")?, field("dim_out")?);
        let kraus = value
            .get("kraus")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Codec("missing `kraus`".into()))?
            .iter()
            .map(matrix_from_value)
            .collect::<Result<Vec<_>>>()?;
        let ch = Self::new(kraus)?;
        if ch.dim_in != dim_in || ch.dim_out != dim_out {
            return Err(Error::Codec(format!(
                "declared {dim_in}->{dim_out} but Kraus operators are {}->{}",
                ch.dim_in, ch.dim_out
            )));
        }
        Ok(ch)
    }
}

/// Completely positive unital map `Y ↦ Σ_k A_k Y A_k*` produced by
/// [`QuantumChannel::adjoint`] (`A_k = E_k*`).
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMap {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl AdjointMap {
    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn apply_matrix(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.dim_in || y.cols() != self.dim_in {
            return Err(Error::dims(format!(
                "adjoint input is {0}x{0}, got {1}x{2}",
                self.dim_in,
                y.rows(),
                y.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &k.sandwich(y)?;
        }
        Ok(out)
    }

    pub fn apply(&self, y: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::from_hermitian_part(&self.apply_matrix(y.matrix())?))
    }

    /// `‖E†(I) − I‖_F`.
    pub fn unitality_defect(&self) -> f64 {
        self.apply_matrix(&ComplexMatrix::identity(self.dim_in))
            .expect("shape")
            .distance(&ComplexMatrix::identity(self.dim_out))
            .expect("shape")
    }
}

/// Fixture channel families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    /// `ω ↦ U ω U*`.
    Unitary { unitary: Vec<[f64; 2]>, dim: usize },
    /// Seeded Haar-random unitary conjugation.
    RandomUnitary { dim: usize, seed: u64 },
    /// Projection onto the block diagonal for consecutive blocks of the given sizes.
    Pinching { blocks: Vec<usize> },
    /// Partial trace over `traced` factors of `⊗ C^{dims[k]}`.
    PartialTrace { dims: Vec<usize>, traced: Vec<usize> },
    /// `ω ↦ (1 − p) ω + p Tr(ω) I/d`.
    Depolarizing { dim: usize, p: f64 },
    /// Seeded random channel `E_k = G_k S^{-1/2}`, `S = Σ G_k* G_k`.
    RandomCptp {
        dim_in: usize,
        dim_out: usize,
        kraus_count: usize,
        seed: u64,
    },
}

/// Builds a fixture channel.
pub fn make_channel(spec: &ChannelSpec) -> Result<QuantumChannel> {
    match spec {
        ChannelSpec::Unitary { unitary, dim } => {
            let data = unitary.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            let u = ComplexMatrix::new(*dim, *dim, data)?;
            unitary_channel(&u)
        }
        ChannelSpec::RandomUnitary { dim, seed } => {
            if *dim == 0 {
                return Err(Error::params("dimension must be positive"));
            }
            unitary_channel(&random_unitary(*dim, &mut seeded_rng(*seed)))
        }
        ChannelSpec::Pinching { blocks } => pinching(blocks),
        ChannelSpec::PartialTrace { dims, traced } => partial_trace_channel(dims, traced),
        ChannelSpec::Depolarizing { dim, p } => depolarizing(*dim, *p),
        ChannelSpec::RandomCptp {
            dim_in,
            dim_out,
            kraus_count,
            seed,
        } => random_cptp(*dim_in, *dim_out, *kraus_count, *seed),
    }
}

pub fn identity_channel(dim: usize) -> Result<QuantumChannel> {
    if dim == 0 {
        return Err(Error::params("dimension must be positive"));
    }
    QuantumChannel::new(vec![ComplexMatrix::identity(dim)])
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<QuantumChannel> {
    if !u.is_square() {
        return Err(Error::params("unitary must be square"));
    }
    QuantumChannel::new(vec![u.clone()]).map_err(|e| Error::params(format!("matrix is not unitary: {e}")))
}

pub fn pinching(blocks: &[usize]) -> Result<QuantumChannel> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::params(format!("invalid pinching blocks {blocks:?}")));
    }
    let dim: usize = blocks.iter().sum();
    let mut start = 0;
    let mut kraus = Vec::with_capacity(blocks.len());
    for &b in blocks {
        let mut p = ComplexMatrix::zeros(dim, dim);
        for i in start..start + b {
            p[(i, i)] = Complex64::new(1.0, 0.0);
        }
        kraus.push(p);
        start += b;
    }
    QuantumChannel::new(kraus)
}

pub fn partial_trace_channel(dims: &[usize], traced: &[usize]) -> Result<QuantumChannel> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::params(format!("invalid factor dimensions {dims:?}")));
    }
    let mut is_traced = vec![false; dims.len()];
    for &t in traced {
        if t >= dims.len() || is_traced[t] {
            return Err(Error::params(format!("invalid traced factors {traced:?}")));
        }
        is_traced[t] = true;
    }
    let total: usize = dims.iter().product();
    let kept_dim: usize = (0..dims.len()).filter(|&k| !is_traced[k]).map(|k| dims[k]).product();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&k| is_traced[k]).map(|k| dims[k]).collect();
    let env: usize = traced_dims.iter().product();

    let mut kraus = vec![ComplexMatrix::zeros(kept_dim, total); env];
    let mut digits = vec![0; dims.len()];
    for col in 0..total {
        let mut rem = col;
        for k in (0..dims.len()).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut kept_idx = 0;
        let mut env_idx = 0;
        for k in 0..dims.len() {
            if is_traced[k] {
                env_idx = env_idx * dims[k] + digits[k];
            } else {
                kept_idx = kept_idx * dims[k] + digits[k];
            }
        }
        kraus[env_idx][(kept_idx, col)] = Complex64::new(1.0, 0.0);
    }
    QuantumChannel::new(kraus)
}

pub fn depolarizing(dim: usize, p: f64) -> Result<QuantumChannel> {
    if dim == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::params(format!(
            "depolarizing needs dim ≥ 1 and p ∈ [0,1], got ({dim}, {p})"
        )));
    }
    let d2 = (dim * dim) as f64;
    let kraus = heisenberg_weyl(dim)
        .into_iter()
        .filter_map(|w| {
            let weight = if w.is_identity() { 1.0 - p + p / d2 } else { p / d2 };
            (weight > 0.0).then(|| w.matrix.scale(weight.sqrt()))
        })
        .collect();
    QuantumChannel::new(kraus)
}

pub fn random_cptp(dim_in: usize, dim_out: usize, kraus_count: usize, seed: u64) -> Result<QuantumChannel> {
    if dim_in == 0 || dim_out == 0 || kraus_count == 0 {
        return Err(Error::params("random channel dimensions must be positive"));
    }
    if kraus_count * dim_out < dim_in {
        return Err(Error::params(format!(
            "{kraus_count} Kraus operators of shape {dim_out}x{dim_in} cannot be trace preserving"
        )));
    }
    let mut rng = seeded_rng(seed);
    let gs: Vec<ComplexMatrix> = (0..kraus_count).map(|_| ginibre(dim_out, dim_in, &mut rng)).collect();
    let s = gs.iter().fold(ComplexMatrix::zeros(dim_in, dim_in), |acc, g| {
        &acc + &(&g.adjoint() * g)
    });
    let s_inv_sqrt = PositiveDefiniteMatrix::from_hermitian_part(&s)?.power(-0.5)?;
    let kraus = gs.iter().map(|g| g * s_inv_sqrt.matrix()).collect();
    QuantumChannel::new(kraus)
}
