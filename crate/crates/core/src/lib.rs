//! Online decoding of higher-order Markov reward models under a latency
//! budget, with competitive-ratio bounds, adversarial instances and an
//! experiment harness.

pub mod adversary;
pub mod bounds;
pub mod decoders;
pub mod harness;
pub mod model;
pub mod trellis;
