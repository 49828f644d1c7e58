//! State space, reward semantics and structural quantities shared by every
//! decoder and bound.

mod context;
mod graph;
mod hmm;
mod oracle;

use thiserror::Error;

pub use context::{contexts_at, ContextWindow};
pub(crate) use context::ContextCodec;
pub use graph::{compute_diameter, NextStates, StateGraph};
pub use hmm::{hmm_rewards, HmmParams, HmmRewards, ModelFile, DUMMY_TOKEN};
pub use oracle::{
    min_reachable_reward, positivize_rewards, total_reward, DecodePath, EffectiveDiameter,
    RewardOracle, RewardTable, Shifted,
};

/// Sentinel standing for a state before the start of the sequence.
pub const DUMMY: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("graph has no states")]
    EmptyGraph,
    #[error("state {state} has no outgoing edge")]
    NoSuccessors { state: usize },
    #[error("state index {state} out of range for {num_states} states")]
    UnknownState { state: usize, num_states: usize },
    #[error("graph is not ergodic: no path from {from} to {to}")]
    NotErgodic { from: usize, to: usize },
    #[error("reward {value} at time {time}, state {state} is negative")]
    NegativeReward { time: usize, state: usize, value: f64 },
    #[error("reward at time {time}, state {state} is unbounded below")]
    Unbounded { time: usize, state: usize },
    #[error("transition {from} -> {to} at time {time} is not an edge")]
    EdgeViolation { time: usize, from: usize, to: usize },
    #[error("path has {got} labels but the horizon is {expected}")]
    HorizonMismatch { expected: usize, got: usize },
    #[error("unknown observation token `{0}`")]
    UnknownToken(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}
