use crate::model::{contexts_at, ContextWindow, RewardOracle, StateGraph};
use crate::trellis::TrellisTable;

use super::online::{run_online, DecodeTrace, OnlineDecoder, Plan, RunOptions};
use super::DecodeError;

/// Peek Reset.
///
/// Each phase starting at `p` looks at the second half of its window,
/// `p + ⌊L/2⌋ + 1 ..= p + L`, and picks the time `Tᵢ` whose best single-step
/// reward `x_t` is smallest (earliest on ties). It then commits the optimal
/// path over `[p, Tᵢ)` and starts the next phase at `Tᵢ`. Once the window
/// reaches the last step, the rest of the sequence is decoded optimally.
#[derive(Debug, Clone)]
pub struct PeekReset {
    latency: usize,
    steady_contexts: Option<Vec<Vec<usize>>>,
}

impl PeekReset {
    pub fn new(latency: usize) -> Result<Self, DecodeError> {
        if latency == 0 {
            return Err(DecodeError::InvalidConfig(
                "peek reset needs latency at least 1".into(),
            ));
        }
        Ok(Self {
            latency,
            steady_contexts: None,
        })
    }

    /// `x_t`: largest reward obtainable at `t` over every valid context.
    fn best_step_reward(&mut self, oracle: &dyn RewardOracle, graph: &StateGraph, t: usize) -> f64 {
        let order = oracle.order();
        let fresh;
        let contexts: &[Vec<usize>] = if t >= order {
            self.steady_contexts
                .get_or_insert_with(|| contexts_at(graph, order, order))
        } else {
            fresh = contexts_at(graph, order, t);
            &fresh
        };
        let mut best = f64::NEG_INFINITY;
        for ctx in contexts {
            let last = ctx.last().copied().unwrap_or(crate::model::DUMMY);
            for s in graph.next_states(last) {
                best = best.max(oracle.reward(t, s, ctx));
            }
        }
        best
    }
}

impl OnlineDecoder for PeekReset {
    fn name(&self) -> &'static str {
        "peek_reset"
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
        let horizon = oracle.horizon();
        let end = if now + self.latency >= horizon - 1 {
            horizon
        } else {
            let mut best: Option<(usize, f64)> = None;
            for t in now + self.latency / 2 + 1..=now + self.latency {
                let x = self.best_step_reward(oracle, graph, t);
                if best.is_none_or(|(_, b)| x < b) {
                    best = Some((t, x));
                }
            }
            best.expect("candidate window is non-empty").0
        };
        let ctx = ContextWindow::from_history(oracle.order(), history);
        let (path, _) = TrellisTable::build(oracle, graph, now, &ctx, end - now, 1.0).best();
        Ok(Plan::whole(path))
    }
}

pub fn peek_reset_decode<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    latency: usize,
) -> Result<DecodeTrace, DecodeError> {
    let mut decoder = PeekReset::new(latency)?;
    run_online(&mut decoder, oracle, graph, RunOptions::default())
}
