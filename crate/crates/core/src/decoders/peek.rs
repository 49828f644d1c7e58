use crate::bounds;
use crate::model::{ContextWindow, DecodePath, RewardOracle, StateGraph, DUMMY};
use crate::trellis::TrellisTable;

use super::online::{run_online, DecodeTrace, OnlineDecoder, Plan, RunOptions};
use super::DecodeError;

/// Discount used when the bound-minimizing value does not exist (`L < Δ̃`).
pub const FALLBACK_GAMMA: f64 = 0.5;

/// Peek Search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeekConfig {
    pub latency: usize,
    /// `None` selects the bound-minimizing discount for the instance.
    pub gamma: Option<f64>,
    /// Surround the sequence with `L + 1` zero-reward steps on each side.
    pub padding: bool,
}

/// A discount factor together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedGamma {
    pub value: f64,
    /// True when `value` is the bound-minimizing discount, so the Peek Search
    /// bound applies.
    pub optimal: bool,
}

impl PeekConfig {
    pub fn new(latency: usize) -> Self {
        Self {
            latency,
            gamma: None,
            padding: false,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn with_padding(mut self, padding: bool) -> Self {
        self.padding = padding;
        self
    }

    pub fn resolve_gamma(&self, order: usize, diameter: usize) -> Result<ResolvedGamma, DecodeError> {
        let optimal = bounds::optimal_gamma(self.latency, order, diameter).ok();
        match self.gamma {
            Some(g) if !(g > 0.0 && g <= 1.0) => Err(DecodeError::InvalidConfig(format!(
                "discount factor {g} outside (0, 1]"
            ))),
            Some(g) => Ok(ResolvedGamma {
                value: g,
                optimal: optimal == Some(g),
            }),
            None => Ok(match optimal {
                Some(g) => ResolvedGamma { value: g, optimal: true },
                None => ResolvedGamma {
                    value: FALLBACK_GAMMA,
                    optimal: false,
                },
            }),
        }
    }
}

/// Outcome of one Peek Search decision.
#[derive(Debug, Clone, PartialEq)]
pub struct PeekStep {
    pub next: usize,
    pub lookahead: Vec<usize>,
    pub score: f64,
}

/// The discounted DP table Peek Search solves at time `now`.
pub fn peek_search_table<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    latency: usize,
    gamma: f64,
    now: usize,
    history: &ContextWindow,
) -> TrellisTable {
    let steps = latency.min(oracle.horizon() - 1 - now) + 1;
    TrellisTable::build(oracle, graph, now, history, steps, gamma)
}

/// Best `γ`-discounted path of up to `L + 1` steps from `history`; the
/// window is cut at the horizon.
pub fn peek_search_step<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    config: &PeekConfig,
    now: usize,
    history: &ContextWindow,
) -> Result<PeekStep, DecodeError> {
    if now >= oracle.horizon() {
        return Err(DecodeError::InvalidConfig(format!(
            "time {now} is past the horizon {}",
            oracle.horizon()
        )));
    }
    let gamma = config.resolve_gamma(oracle.order(), graph.diameter())?.value;
    let (lookahead, score) =
        peek_search_table(oracle, graph, config.latency, gamma, now, history).best();
    Ok(PeekStep {
        next: lookahead[0],
        lookahead,
        score,
    })
}

/// Streaming Peek Search: replan every step, keep only the first state.
#[derive(Debug, Clone)]
pub struct PeekSearch {
    latency: usize,
    gamma: f64,
}

impl PeekSearch {
    pub fn new(latency: usize, gamma: f64) -> Self {
        Self { latency, gamma }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl OnlineDecoder for PeekSearch {
    fn name(&self) -> &'static str {
        "peek_search"
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
        let ctx = ContextWindow::from_history(oracle.order(), history);
        let (path, _) = peek_search_table(oracle, graph, self.latency, self.gamma, now, &ctx).best();
        Ok(Plan::single(path))
    }
}

/// Wraps an oracle with `pad` zero-reward steps before and after it.
///
/// Contexts that reach back into the leading pad are presented to the inner
/// oracle as dummies, so padded and unpadded runs score real steps alike.
#[derive(Debug, Clone)]
pub struct PaddedOracle<O> {
    inner: O,
    pad: usize,
}

impl<O: RewardOracle> PaddedOracle<O> {
    pub fn new(inner: O, pad: usize) -> Self {
        Self { inner, pad }
    }

    pub fn pad(&self) -> usize {
        self.pad
    }
}

impl<O: RewardOracle> RewardOracle for PaddedOracle<O> {
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }
    fn order(&self) -> usize {
        self.inner.order()
    }
    fn horizon(&self) -> usize {
        self.inner.horizon() + 2 * self.pad
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        if time < self.pad || time >= self.pad + self.inner.horizon() {
            return 0.0;
        }
        let inner_time = time - self.pad;
        let n = context.len();
        if inner_time >= n {
            return self.inner.reward(inner_time, state, context);
        }
        let mut ctx = context.to_vec();
        for slot in ctx.iter_mut().take(n - inner_time) {
            *slot = DUMMY;
        }
        self.inner.reward(inner_time, state, &ctx)
    }
}

/// Runs Peek Search over the whole sequence.
///
/// With `padding` the decoder also walks `L + 1` zero-reward steps on either
/// side; the returned path and totals cover only the real steps.
pub fn peek_search_decode<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    config: &PeekConfig,
) -> Result<DecodeTrace, DecodeError> {
    let gamma = config.resolve_gamma(oracle.order(), graph.diameter())?.value;
    let mut decoder = PeekSearch::new(config.latency, gamma);
    if !config.padding {
        return run_online(&mut decoder, oracle, graph, RunOptions::default());
    }
    let pad = config.latency + 1;
    let horizon = oracle.horizon();
    let padded = PaddedOracle::new(oracle, pad);
    let trace = run_online(&mut decoder, &padded, graph, RunOptions::default())?;
    let labels = trace.path.labels[pad..pad + horizon].to_vec();
    let path = DecodePath::score(labels, oracle, graph)?;
    Ok(DecodeTrace {
        decoder: trace.decoder,
        path,
        per_step_choices: trace.per_step_choices[pad..pad + horizon].to_vec(),
        recompute_times: trace
            .recompute_times
            .iter()
            .filter(|&&t| t >= pad && t < pad + horizon)
            .map(|&t| t - pad)
            .collect(),
        audit: trace.audit,
        query_log: None,
    })
}

/// Default discount for an instance: the bound-minimizing value when `L ≥ Δ̃`.
pub fn default_gamma(latency: usize, graph: &StateGraph, order: usize) -> ResolvedGamma {
    PeekConfig::new(latency)
        .resolve_gamma(order, graph.diameter())
        .expect("default discount is always valid")
}
