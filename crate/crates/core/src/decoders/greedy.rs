use crate::model::{ContextWindow, RewardOracle, StateGraph};

use super::online::{run_online, DecodeTrace, OnlineDecoder, Plan, RunOptions};
use super::DecodeError;

/// Zero-latency baseline: take the best immediate reward, lowest index on
/// ties.
#[derive(Debug, Clone, Default)]
pub struct Greedy;

impl OnlineDecoder for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn latency(&self) -> usize {
        0
    }

    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError> {
        let ctx = ContextWindow::from_history(oracle.order(), history);
        let mut best: Option<(usize, f64)> = None;
        for s in graph.next_states(ctx.last()) {
            let r = oracle.reward(now, s, ctx.as_slice());
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((s, r));
            }
        }
        let (s, _) = best.expect("every state has a successor");
        Ok(Plan::single(vec![s]))
    }
}

pub fn greedy_decode<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
) -> Result<DecodeTrace, DecodeError> {
    run_online(&mut Greedy, oracle, graph, RunOptions::default())
}
