//! Online decoders, the streaming driver and the latency audit.

mod audit;
mod greedy;
mod online;
mod peek;
mod randomized;
mod reset;
mod viterbi;

use thiserror::Error;

use crate::model::ModelError;

pub use audit::{check_commitment, AuditStats, CommitmentBreach, LatencyAudit, QueryRecord};
pub use greedy::{greedy_decode, Greedy};
pub use online::{run_online, DecodeTrace, OnlineDecoder, Plan, PositionHook, RunOptions};
pub use peek::{
    default_gamma, peek_search_decode, peek_search_step, peek_search_table, PaddedOracle,
    PeekConfig, PeekSearch, PeekStep, ResolvedGamma, FALLBACK_GAMMA,
};
pub use randomized::{
    randomized_peek_search_decode, randomized_peek_search_with_reset, reset_point,
    RandomizedPeekSearch,
};
pub use reset::{peek_reset_decode, PeekReset};
pub use viterbi::{viterbi_decode, Viterbi};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("decoder at position {position} looked at time {time}, beyond its latency")]
    LatencyViolation { position: usize, time: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
}
