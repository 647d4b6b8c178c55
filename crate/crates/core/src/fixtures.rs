//! Seeded test fixtures: DPI equality cases built by construction, generic
//! strict cases, random triples and the standard parameter grids.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{
    identity_channel, make_channel, partial_trace_channel, pinching, random_cptp, random_state, seeded_rng,
    ChannelSpec, QuantumChannel, QuantumState,
};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, HermitianMatrix};

/// Region points for monotonicity sweeps: all three cases, their edges and the
/// case-2/3 overlap.
pub const DPI_GRID: [(f64, f64); 12] = [
    (0.5, 0.5),
    (0.3, 0.7),
    (0.3, 1.0),
    (0.7, 2.0),
    (1.2, 1.0),
    (1.5, 0.75),
    (1.5, 1.0),
    (1.5, 1.5),
    (2.0, 1.0),
    (2.0, 2.0),
    (3.0, 2.0),
    (4.0, 3.5),
];

/// Region points for certificate checks, one or two per case, including
/// `p = 1` and `q = −1` points.
pub const CERTIFICATE_GRID: [(f64, f64); 6] = [(0.6, 1.0), (0.3, 0.7), (1.5, 1.0), (1.5, 1.5), (2.0, 2.0), (3.0, 2.5)];

/// Dimension of the traced factor in the product partial-trace fixture.
pub const TRACED_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    Identity,
    Unitary,
    Pinching,
    ProductPartialTrace,
    /// Generic random channel; DPI is strict for almost every seed.
    Random,
}

impl FixtureKind {
    pub const EQUALITY: [FixtureKind; 4] = [
        FixtureKind::Identity,
        FixtureKind::Unitary,
        FixtureKind::Pinching,
        FixtureKind::ProductPartialTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::Identity => "identity",
            FixtureKind::Unitary => "unitary",
            FixtureKind::Pinching => "pinching",
            FixtureKind::ProductPartialTrace => "product_partial_trace",
            FixtureKind::Random => "random",
        }
    }

    pub fn is_equality_case(self) -> bool {
        self != FixtureKind::Random
    }
}

impl std::str::FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(FixtureKind::Identity),
            "unitary" => Ok(FixtureKind::Unitary),
            "pinching" => Ok(FixtureKind::Pinching),
            "product_partial_trace" => Ok(FixtureKind::ProductPartialTrace),
            "random" => Ok(FixtureKind::Random),
            other => Err(Error::params(format!("unknown fixture `{other}`"))),
        }
    }
}

/// Two states and a channel.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub dim: usize,
    pub seed: u64,
    pub rho: QuantumState,
    pub sigma: QuantumState,
    pub channel: QuantumChannel,
}

/// Pinching blocks used for a given total dimension.
pub fn pinching_blocks(dim: usize) -> Vec<usize> {
    match dim {
        0 | 1 => vec![dim],
        2 => vec![1, 1],
        3 => vec![2, 1],
        _ => {
            let half = dim / 2;
            vec![half, dim - half]
        }
    }
}

/// Block-diagonal state `⊕_b w_b ρ_b` with seeded blocks and weights.
fn block_diagonal_state(blocks: &[usize], seed: u64) -> Result<QuantumState> {
    let dim: usize = blocks.iter().sum();
    let mut rng = seeded_rng(seed);
    let weights: Vec<f64> = blocks.iter().map(|_| 0.5 + rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim, dim);
    let mut start = 0;
    for (b, (&size, w)) in blocks.iter().zip(&weights).enumerate() {
        let block = random_state(size, seed.wrapping_mul(31).wrapping_add(b as u64 + 1))?;
        for i in 0..size {
            for j in 0..size {
                m[(start + i, start + j)] = block.matrix()[(i, j)] * (w / total);
            }
        }
        start += size;
    }
    QuantumState::normalized(HermitianMatrix::from_hermitian_part(&m))
}

/// Builds a fixture. `dim` is the input dimension, except for the product
/// partial trace where it is the dimension of the kept factor (the input is
/// `dim · TRACED_DIM`).
pub fn make_fixture(kind: FixtureKind, dim: usize, seed: u64) -> Result<Fixture> {
    if dim == 0 {
        return Err(Error::params("fixture dimension must be positive"));
    }
    let s = seed.wrapping_mul(4);
    let (rho, sigma, channel) = match kind {
        FixtureKind::Identity => (random_state(dim, s)?, random_state(dim, s + 1)?, identity_channel(dim)?),
        FixtureKind::Unitary => (
            random_state(dim, s)?,
            random_state(dim, s + 1)?,
            make_channel(&ChannelSpec::RandomUnitary { dim, seed: s + 2 })?,
        ),
        FixtureKind::Pinching => {
            let blocks = pinching_blocks(dim);
            (
                block_diagonal_state(&blocks, s)?,
                block_diagonal_state(&blocks, s + 1)?,
                pinching(&blocks)?,
            )
        }
        FixtureKind::ProductPartialTrace => {
            let tau = random_state(TRACED_DIM, s + 2)?;
            let rho = QuantumState::new(kron(random_state(dim, s)?.matrix(), tau.matrix()))?;
            let sigma = QuantumState::new(kron(random_state(dim, s + 1)?.matrix(), tau.matrix()))?;
            (rho, sigma, partial_trace_channel(&[dim, TRACED_DIM], &[1])?)
        }
        FixtureKind::Random => (
            random_state(dim, s)?,
            random_state(dim, s + 1)?,
            random_cptp(dim, dim, 2, s + 2)?,
        ),
    };
    Ok(Fixture {
        kind,
        dim,
        seed,
        rho,
        sigma,
        channel,
    })
}

/// Seeded random `(ρ, σ, E)` with input and output dimensions in 2–4 and a
/// Kraus count large enough for a faithful image.
pub fn random_triple(seed: u64) -> Result<(QuantumState, QuantumState, QuantumChannel)> {
    let mut rng = seeded_rng(seed ^ 0x7f4a_7c15);
    let dim_in = rng.random_range(2..=4usize);
    let dim_out = rng.random_range(2..=4usize);
    let min_kraus = dim_in.div_ceil(dim_out).max(dim_out.div_ceil(dim_in));
    let kraus_count = min_kraus + rng.random_range(0..=2usize);
    let base = rng.random::<u64>();
    let rho = random_state(dim_in, base)?;
    let sigma = random_state(dim_in, base.wrapping_add(1))?;
    let channel = random_cptp(dim_in, dim_out, kraus_count, base.wrapping_add(2))?;
    Ok((rho, sigma, channel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropies::{region_check, ParamPoint};

    #[test]
    fn grids_are_in_region() {
        for (a, z) in DPI_GRID.iter().chain(CERTIFICATE_GRID.iter()) {
            assert!(region_check(&ParamPoint::new(*a, *z).unwrap()).valid, "({a}, {z})");
        }
    }

    #[test]
    fn pinching_fixture_is_fixed_by_channel() {
        for dim in 2..=4 {
            let f = make_fixture(FixtureKind::Pinching, dim, 3).unwrap();
            let out = f.channel.apply_matrix(f.rho.matrix()).unwrap();
            assert!(out.distance(f.rho.matrix()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn random_triples_have_faithful_images() {
        for seed in 0..50 {
            let (rho, sigma, e) = random_triple(seed).unwrap();
            e.apply_state(&rho).unwrap();
            e.apply_state(&sigma).unwrap();
        }
    }
}
