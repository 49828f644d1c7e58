use std::sync::Arc;

use super::context::{contexts_at, ContextCodec, ContextWindow};
use super::{ModelError, StateGraph};

/// Time-indexed reward function `R_t(state | context)`.
///
/// Times are zero-based (`0..horizon`). `context` always holds exactly
/// `order` entries, oldest first, with [`super::DUMMY`] padding before the
/// first real state.
pub trait RewardOracle {
    fn num_states(&self) -> usize;
    fn order(&self) -> usize;
    fn horizon(&self) -> usize;
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64;
}

impl<T: RewardOracle + ?Sized> RewardOracle for &T {
    fn num_states(&self) -> usize {
        (**self).num_states()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        (**self).reward(time, state, context)
    }
}

impl<T: RewardOracle + ?Sized> RewardOracle for Box<T> {
    fn num_states(&self) -> usize {
        (**self).num_states()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        (**self).reward(time, state, context)
    }
}

impl<T: RewardOracle + ?Sized> RewardOracle for Arc<T> {
    fn num_states(&self) -> usize {
        (**self).num_states()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        (**self).reward(time, state, context)
    }
}

/// Dense precomputed rewards indexed by time, context and state.
///
/// This is the ingestion path for models whose rewards come from an external
/// scorer (maximum-entropy or CRF-style feature models): evaluate the scorer
/// once per cell and hand the table to the decoders.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardTable {
    num_states: usize,
    order: usize,
    horizon: usize,
    codec_size: usize,
    values: Vec<f64>,
}

impl RewardTable {
    /// Fills every cell from `f(time, state, context)`. Contexts that cannot
    /// occur on a path are filled too; their values are never read.
    pub fn from_fn<F>(num_states: usize, order: usize, horizon: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize, &[usize]) -> f64,
    {
        assert!(order >= 1, "order must be positive");
        let codec = ContextCodec::new(num_states, order);
        let mut values = Vec::with_capacity(horizon * codec.size() * num_states);
        let mut ctx = vec![0; order];
        for t in 0..horizon {
            for key in 0..codec.size() {
                codec.decode_into(key, &mut ctx);
                for s in 0..num_states {
                    values.push(f(t, s, &ctx));
                }
            }
        }
        Self {
            num_states,
            order,
            horizon,
            codec_size: codec.size(),
            values,
        }
    }

    /// Snapshot of any oracle.
    pub fn capture<O: RewardOracle + ?Sized>(oracle: &O) -> Self {
        Self::from_fn(oracle.num_states(), oracle.order(), oracle.horizon(), |t, s, c| {
            oracle.reward(t, s, c)
        })
    }

    fn index(&self, time: usize, state: usize, context: &[usize]) -> usize {
        let codec = ContextCodec::new(self.num_states, self.order);
        (time * self.codec_size + codec.encode(context)) * self.num_states + state
    }

    pub fn set(&mut self, time: usize, state: usize, context: &[usize], value: f64) {
        let i = self.index(time, state, context);
        self.values[i] = value;
    }
}

impl RewardOracle for RewardTable {
    fn num_states(&self) -> usize {
        self.num_states
    }
    fn order(&self) -> usize {
        self.order
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        self.values[self.index(time, state, context)]
    }
}

/// An oracle with a constant `offset` added to every reward.
#[derive(Debug, Clone)]
pub struct Shifted<O> {
    inner: O,
    offset: f64,
}

impl<O: RewardOracle> Shifted<O> {
    pub fn new(inner: O, offset: f64) -> Self {
        Self { inner, offset }
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: RewardOracle> RewardOracle for Shifted<O> {
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }
    fn order(&self) -> usize {
        self.inner.order()
    }
    fn horizon(&self) -> usize {
        self.inner.horizon()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        self.inner.reward(time, state, context) + self.offset
    }
}

/// Smallest reward over every `(time, state, context)` reachable in `graph`,
/// with the cell where it occurs.
pub fn min_reachable_reward<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
) -> Result<Option<(f64, usize, usize)>, ModelError> {
    let order = oracle.order();
    let mut steady: Option<Vec<Vec<usize>>> = None;
    let mut best: Option<(f64, usize, usize)> = None;
    for t in 0..oracle.horizon() {
        let contexts = if t >= order {
            steady.get_or_insert_with(|| contexts_at(graph, order, order))
        } else {
            &contexts_at(graph, order, t)
        };
        for ctx in contexts.iter() {
            let prev = ctx.last().copied().unwrap_or(super::DUMMY);
            for s in graph.next_states(prev) {
                let r = oracle.reward(t, s, ctx);
                if r.is_nan() || r == f64::NEG_INFINITY {
                    return Err(ModelError::Unbounded { time: t, state: s });
                }
                if best.is_none_or(|(b, _, _)| r < b) {
                    best = Some((r, t, s));
                }
            }
        }
    }
    Ok(best)
}

/// Shifts `raw` by the tight offset `p = max(0, -min reward)` so that every
/// reachable reward is non-negative. Optimal paths are unchanged because
/// every path collects exactly `horizon * p` extra.
pub fn positivize_rewards<O: RewardOracle>(
    raw: O,
    graph: &StateGraph,
) -> Result<(Shifted<O>, f64), ModelError> {
    let min = min_reachable_reward(&raw, graph)?;
    let p = match min {
        Some((m, _, _)) if m < 0.0 => -m,
        _ => 0.0,
    };
    Ok((Shifted::new(raw, p), p))
}

/// A labeled state sequence with its per-step rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodePath {
    pub labels: Vec<usize>,
    pub step_rewards: Vec<f64>,
    pub total: f64,
}

impl DecodePath {
    /// Scores `labels` against `oracle`, checking every transition.
    pub fn score<O: RewardOracle + ?Sized>(
        labels: Vec<usize>,
        oracle: &O,
        graph: &StateGraph,
    ) -> Result<Self, ModelError> {
        if labels.len() != oracle.horizon() {
            return Err(ModelError::HorizonMismatch {
                expected: oracle.horizon(),
                got: labels.len(),
            });
        }
        let mut ctx = ContextWindow::initial(oracle.order());
        let mut step_rewards = Vec::with_capacity(labels.len());
        for (t, &s) in labels.iter().enumerate() {
            if !graph.allows(ctx.last(), s) {
                return Err(ModelError::EdgeViolation {
                    time: t,
                    from: ctx.last(),
                    to: s,
                });
            }
            step_rewards.push(oracle.reward(t, s, ctx.as_slice()));
            ctx.push(s);
        }
        let total = step_rewards.iter().sum();
        Ok(Self {
            labels,
            step_rewards,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Total reward of `path` under `oracle`, recomputed from its labels.
pub fn total_reward<O: RewardOracle + ?Sized>(
    path: &DecodePath,
    oracle: &O,
    graph: &StateGraph,
) -> Result<f64, ModelError> {
    Ok(DecodePath::score(path.labels.clone(), oracle, graph)?.total)
}

/// `Δ + n - 1`: the number of steps an online decoder may have to give up
/// to rejoin a path when rewards depend on `n` previous states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EffectiveDiameter(usize);

impl EffectiveDiameter {
    pub fn new(diameter: usize, order: usize) -> Self {
        assert!(diameter >= 1 && order >= 1);
        Self(diameter + order - 1)
    }

    pub fn of(graph: &StateGraph, order: usize) -> Self {
        Self::new(graph.diameter(), order)
    }

    pub fn value(self) -> usize {
        self.0
    }
}
