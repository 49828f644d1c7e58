use crate::model::{ContextWindow, RewardOracle, StateGraph};
use crate::trellis::TrellisTable;

use super::online::{run_online, DecodeTrace, OnlineDecoder, Plan, RunOptions};
use super::DecodeError;

/// Exact offline decoding. Declares latency `T - 1`: the whole sequence is
/// read before the first label is emitted.
#[derive(Debug, Clone)]
pub struct Viterbi {
    horizon: usize,
}

impl Viterbi {
    pub fn new(horizon: usize) -> Self {
        Self { horizon }
    }
}

impl OnlineDecoder for Viterbi {
    fn name(&self) -> &'static str {
        "viterbi"
    }

    fn latency(&self) -> usize {
        self.horizon.saturating_sub(1)
    }

    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError> {
        let ctx = ContextWindow::from_history(oracle.order(), history);
        let steps = oracle.horizon() - now;
        let (path, _) = TrellisTable::build(oracle, graph, now, &ctx, steps, 1.0).best();
        Ok(Plan::whole(path))
    }
}

/// Maximum-reward path over the full horizon (lexicographically smallest
/// among ties).
pub fn viterbi_decode<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
) -> Result<DecodeTrace, DecodeError> {
    let mut decoder = Viterbi::new(oracle.horizon());
    run_online(&mut decoder, oracle, graph, RunOptions::default())
}
