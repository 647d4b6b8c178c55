//! Alpha-z Rényi relative entropies and the algebra of their data-processing
//! equality cases.
//!
//! The crate covers:
//!
//! - [`linalg`]: dense complex matrices, a Jacobi Hermitian eigensolver and the
//!   functional calculus (fractional powers, logs, moduli) built on it.
//! - [`channels`]: faithful states, Kraus channels, adjoints, Choi matrices,
//!   Stinespring dilations and the Heisenberg–Weyl twirl.
//! - [`entropies`]: the trace functional `Ψ_{p,q}`, `D_{α,z}` and its Petz,
//!   sandwiched and Umegaki relatives, plus the monotonicity region in `(α, z)`.
//! - [`certificates`]: the operators `x`, `y`, the four equality conditions,
//!   recovery maps and the twirled proof artifacts.
//! - [`variational`]: variational formulas on the positive-definite cone with
//!   closed-form optimizers, a descent solver that certifies uniqueness
//!   numerically, the matrix-pair equation solver and convexity probes.
//!
//! Logarithms are natural throughout.

#![forbid(unsafe_code)]

pub mod certificates;
pub mod channels;
pub mod entropies;
mod error;
pub mod fixtures;
pub mod linalg;
pub mod tolerances;
pub mod variational;

pub use error::{Error, Result};

/// Library version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
