//! Two-way modulo-2 sum computation over the linear deterministic channel.
//!
//! Modules, bottom up: [`gf2`] signal vectors, [`channel`] the four-node
//! network, [`capacity`] the exact rate-region calculus, [`decomposition`]
//! elementary subchannels and scheme planning, [`schemes`] the catalog of
//! causal linear coding schemes, [`simulator`] slotted execution and
//! verification.

pub mod capacity;
pub mod channel;
pub mod decomposition;
pub mod gf2;
pub mod scalar;
pub mod schemes;
pub mod simulator;

/// Exact rational used throughout the crate.
pub type Rational = num_rational::Ratio<i64>;
/// Rate pair over [`Rational`].
pub type Rate = capacity::RatePair<Rational>;
/// Capacity region over [`Rational`].
pub type Region = capacity::CapacityRegion<Rational>;

pub use capacity::{GainClass, RatePair};
pub use channel::ChannelConfig;
pub use gf2::BitVector;
