//! Quantum states, channels in Kraus form, Stinespring dilations and the
//! Heisenberg–Weyl twirl.

mod channel;
mod dilation;
mod random;
mod state;
mod weyl;

pub use channel::{
    depolarizing, identity_channel, make_channel, partial_trace_channel, pinching, random_cptp, unitary_channel,
    AdjointMap, ChannelSpec, QuantumChannel,
};
pub use dilation::{stinespring_dilate, StinespringDilation};
pub use random::{
    complex_gaussian, ginibre, orthonormalize_columns, random_hermitian, random_unitary, seeded_rng, SeededRng,
};
pub use state::{random_state, PureState, QuantumState};
pub use weyl::{heisenberg_weyl, twirl, twirled_decomposition, TwirledDecomposition, WeylOperator};
