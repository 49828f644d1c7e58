//! Instances on which every online decoder loses a provable fraction of the
//! offline optimum.
//!
//! * [`build_prismatic_polytope`]: state graphs with prescribed diameter.
//! * [`play_deterministic_game`]: an adaptive adversary that reveals reward
//!   columns as the decoder's window advances and reacts to its choices.
//! * [`randomized_adversary_instance`]: a fixed instance with one hidden
//!   high-reward row, for randomized decoders.

mod game;
mod polytope;
mod randomized;
mod rewards;

use thiserror::Error;

use crate::decoders::{CommitmentBreach, DecodeError};
use crate::model::ModelError;

pub use game::{play_deterministic_game, DeterministicGame, GameBranch, RatioOutcome};
pub use polytope::{build_prismatic_polytope, polytope_vertex, PolytopeVertex};
pub use randomized::{randomized_adversary_instance, RandomizedInstance};
pub use rewards::{AdaptiveMatrix, ConsecutiveVisitOracle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("invalid adversary configuration: {0}")]
    InvalidConfig(String),
    #[error("decoder at position {position} looked at time {time}, outside its window")]
    ProtocolViolation { position: usize, time: usize },
    #[error("reward at time {} changed after it was revealed", .0.time)]
    CommitmentBroken(CommitmentBreach),
    #[error(transparent)]
    Decode(DecodeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<DecodeError> for AdversaryError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::LatencyViolation { position, time } => {
                AdversaryError::ProtocolViolation { position, time }
            }
            other => AdversaryError::Decode(other),
        }
    }
}

/// The reward level `a` that makes both branches of the deterministic game
/// equally bad for the decoder:
/// `a = (n+L-1 + √((n+L-1)² + 4n)) / (2n)`.
///
/// For diameter above one the game uses `n = Δ̃`.
pub fn adversary_constant_a(latency: usize, order: usize) -> Result<f64, AdversaryError> {
    if latency == 0 || order == 0 {
        return Err(AdversaryError::InvalidConfig(format!(
            "adversary constant needs L ≥ 1 and n ≥ 1 (got L={latency}, n={order})"
        )));
    }
    let n = order as f64;
    let s = n + latency as f64 - 1.0;
    Ok((s + (s * s + 4.0 * n).sqrt()) / (2.0 * n))
}

/// The two ratios the decoder can be held to: `r₁` if it stays on its first
/// state, `r₂` if it moves away.
pub fn branch_ratios(latency: usize, order: usize, a: f64) -> (f64, f64) {
    let (l, n) = (latency as f64, order as f64);
    let r1 = 1.0 + n * a / (1.0 + (l - 1.0) * a);
    let r2 = 1.0 + (1.0 + n * a) / (l * a);
    (r1, r2)
}
