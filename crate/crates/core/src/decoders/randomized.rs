use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{ContextWindow, RewardOracle, StateGraph};
use crate::trellis::TrellisTable;

use super::online::{run_online, DecodeTrace, OnlineDecoder, Plan, RunOptions};
use super::DecodeError;

/// The reset offset `ℓ ∈ {1, …, L + 1}` drawn for `seed`.
pub fn reset_point(seed: u64, latency: usize) -> usize {
    ChaCha8Rng::seed_from_u64(seed).random_range(1..=latency + 1)
}

/// Randomized Peek Search with a fixed reset offset `ℓ`.
///
/// Resets happen at times `ℓ - 1 + k(L + 1)`. At each reset the decoder
/// solves the undiscounted problem over the next `L + 1` steps and commits
/// all of them. The stretch before the first reset is decoded the same way
/// from time 0.
#[derive(Debug, Clone)]
pub struct RandomizedPeekSearch {
    latency: usize,
    reset: usize,
}

impl RandomizedPeekSearch {
    pub fn new(latency: usize, reset: usize) -> Result<Self, DecodeError> {
        if latency == 0 {
            return Err(DecodeError::InvalidConfig(
                "randomized peek search needs latency at least 1".into(),
            ));
        }
        if !(1..=latency + 1).contains(&reset) {
            return Err(DecodeError::InvalidConfig(format!(
                "reset offset {reset} outside 1..={}",
                latency + 1
            )));
        }
        Ok(Self { latency, reset })
    }

    pub fn from_seed(latency: usize, seed: u64) -> Result<Self, DecodeError> {
        Self::new(latency, reset_point(seed, latency))
    }

    pub fn reset(&self) -> usize {
        self.reset
    }
}

impl OnlineDecoder for RandomizedPeekSearch {
    fn name(&self) -> &'static str {
        "randomized_peek_search"
    }

    fn latency(&self) -> usize {
        self.latency
    }

    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError> {
        let first_reset = self.reset - 1;
        let end = if now < first_reset {
            first_reset
        } else {
            now + self.latency + 1
        }
        .min(oracle.horizon());
        let ctx = ContextWindow::from_history(oracle.order(), history);
        let (path, _) = TrellisTable::build(oracle, graph, now, &ctx, end - now, 1.0).best();
        Ok(Plan::whole(path))
    }
}

/// Randomized Peek Search with the offset drawn from `seed`.
pub fn randomized_peek_search_decode<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    latency: usize,
    seed: u64,
) -> Result<DecodeTrace, DecodeError> {
    let mut decoder = RandomizedPeekSearch::from_seed(latency, seed)?;
    run_online(&mut decoder, oracle, graph, RunOptions::default())
}

/// Randomized Peek Search with an explicit offset `ℓ`.
pub fn randomized_peek_search_with_reset<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    latency: usize,
    reset: usize,
) -> Result<DecodeTrace, DecodeError> {
    let mut decoder = RandomizedPeekSearch::new(latency, reset)?;
    run_online(&mut decoder, oracle, graph, RunOptions::default())
}
