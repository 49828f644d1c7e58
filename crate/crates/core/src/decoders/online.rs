use crate::model::{DecodePath, RewardOracle, StateGraph};

use super::audit::{AuditStats, LatencyAudit, QueryRecord};
use super::DecodeError;

/// What a decoder commits to when asked for the label at `now`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    /// Planned states starting at `now`.
    pub path: Vec<usize>,
    /// How many leading states of `path` become final labels (at least 1).
    pub commit: usize,
}

impl Plan {
    pub fn single(path: Vec<usize>) -> Self {
        Self { path, commit: 1 }
    }

    pub fn whole(path: Vec<usize>) -> Self {
        let commit = path.len();
        Self { path, commit }
    }
}

/// A streaming decoder driven one position at a time.
///
/// `decide` is called at position `now` whenever the label for `now` has not
/// been committed yet. All reward lookups must go through `oracle`, which
/// rejects anything later than `now + latency()`.
pub trait OnlineDecoder {
    fn name(&self) -> &'static str;
    fn latency(&self) -> usize;
    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError>;
}

impl<D: OnlineDecoder + ?Sized> OnlineDecoder for &mut D {
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn latency(&self) -> usize {
        (**self).latency()
    }
    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError> {
        (**self).decide(now, history, oracle, graph)
    }
}

impl<D: OnlineDecoder + ?Sized> OnlineDecoder for Box<D> {
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn latency(&self) -> usize {
        (**self).latency()
    }
    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError> {
        (**self).decide(now, history, oracle, graph)
    }
}

/// Result of a full decoding run.
#[derive(Debug, Clone)]
pub struct DecodeTrace {
    pub decoder: &'static str,
    pub path: DecodePath,
    /// For each time, the remainder of the plan its label was taken from
    /// (for Peek Search: the full lookahead path chosen at that time).
    pub per_step_choices: Vec<Vec<usize>>,
    /// Times at which the decoder planned afresh.
    pub recompute_times: Vec<usize>,
    pub audit: AuditStats,
    pub query_log: Option<Vec<QueryRecord>>,
}

impl DecodeTrace {
    pub fn labels(&self) -> &[usize] {
        &self.path.labels
    }

    pub fn total(&self) -> f64 {
        self.path.total
    }
}

/// Callback run before each position with the labels committed so far.
pub type PositionHook<'h> = &'h mut dyn FnMut(usize, &[usize]);

/// Knobs for [`run_online`].
#[derive(Default)]
pub struct RunOptions<'h> {
    /// Keep every answered reward for commitment checks.
    pub log_values: bool,
    /// Called at each position before the decoder runs, with the labels
    /// committed so far. Adaptive instances reveal rewards here.
    pub before_position: Option<PositionHook<'h>>,
}

/// Drives `decoder` over the whole horizon of `oracle`, auditing every reward
/// lookup against the decoder's declared latency, then scores the labels.
pub fn run_online<O: RewardOracle + ?Sized>(
    decoder: &mut dyn OnlineDecoder,
    oracle: &O,
    graph: &StateGraph,
    mut options: RunOptions<'_>,
) -> Result<DecodeTrace, DecodeError> {
    let horizon = oracle.horizon();
    if oracle.num_states() != graph.num_states() {
        return Err(DecodeError::InvalidConfig(format!(
            "oracle has {} states, graph has {}",
            oracle.num_states(),
            graph.num_states()
        )));
    }
    let view: &dyn RewardOracle = &DynRef(oracle);
    let mut audit = LatencyAudit::new(view, decoder.latency());
    if options.log_values {
        audit = audit.with_value_log();
    }

    let mut labels: Vec<usize> = Vec::with_capacity(horizon);
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(horizon);
    let mut recompute_times = Vec::new();

    for now in 0..horizon {
        if let Some(hook) = options.before_position.as_mut() {
            hook(now, &labels);
        }
        audit.set_position(now);
        if labels.len() > now {
            continue;
        }
        let plan = decoder.decide(now, &labels, &audit, graph)?;
        if let Some((position, time)) = audit.first_violation() {
            return Err(DecodeError::LatencyViolation { position, time });
        }
        if plan.commit == 0 || plan.commit > plan.path.len() || now + plan.commit > horizon {
            return Err(DecodeError::InvalidPlan(format!(
                "{} at {now}: commit {} of a {}-step plan",
                decoder.name(),
                plan.commit,
                plan.path.len()
            )));
        }
        recompute_times.push(now);
        for k in 0..plan.commit {
            let s = plan.path[k];
            let prev = labels.last().copied().unwrap_or(crate::model::DUMMY);
            if !graph.allows(prev, s) {
                return Err(DecodeError::Model(crate::model::ModelError::EdgeViolation {
                    time: now + k,
                    from: prev,
                    to: s,
                }));
            }
            labels.push(s);
            choices.push(plan.path[k..].to_vec());
        }
    }

    let path = DecodePath::score(labels, oracle, graph)?;
    Ok(DecodeTrace {
        decoder: decoder.name(),
        path,
        per_step_choices: choices,
        recompute_times,
        audit: audit.stats(),
        query_log: audit.take_log(),
    })
}

/// Lets a `?Sized` oracle be used as `&dyn RewardOracle`.
struct DynRef<'a, O: ?Sized>(&'a O);

impl<O: RewardOracle + ?Sized> RewardOracle for DynRef<'_, O> {
    fn num_states(&self) -> usize {
        self.0.num_states()
    }
    fn order(&self) -> usize {
        self.0.order()
    }
    fn horizon(&self) -> usize {
        self.0.horizon()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        self.0.reward(time, state, context)
    }
}
