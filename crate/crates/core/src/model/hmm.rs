use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::context::ContextCodec;
use super::oracle::min_reachable_reward;
use super::{ModelError, RewardOracle, StateGraph, DUMMY};

/// Context token standing for a dummy (pre-sequence) state in model files.
pub const DUMMY_TOKEN: &str = "*";

/// On-disk description of an order-`n` HMM / `(n+1)`-gram tagger.
///
/// `transition_logprobs` maps a context (its `n` state names joined by single
/// spaces, oldest first, `*` for dummies) to a map from next state to
/// log-probability. Missing entries mean the transition is impossible; such
/// transitions must also be absent from `edges`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_logprobs: Option<BTreeMap<String, f64>>,
    pub transition_logprobs: BTreeMap<String, BTreeMap<String, f64>>,
    pub emission_logprobs: BTreeMap<String, BTreeMap<String, f64>>,
    pub vocabulary: Vec<String>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::InvalidModel(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model file serializes");
        s.push('\n');
        s
    }

    fn state_index(&self) -> HashMap<&str, usize> {
        self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
    }

    fn lookup(&self, index: &HashMap<&str, usize>, name: &str) -> Result<usize, ModelError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::InvalidModel(format!("unknown state `{name}`")))
    }

    /// Transition structure: `edges` when given, otherwise complete.
    pub fn graph(&self) -> Result<StateGraph, ModelError> {
        if self.states.is_empty() {
            return Err(ModelError::EmptyGraph);
        }
        let Some(edges) = &self.edges else {
            return Ok(StateGraph::fully_connected(self.states.len()));
        };
        let index = self.state_index();
        let mut succ = vec![Vec::new(); self.states.len()];
        for (from, tos) in edges {
            let f = self.lookup(&index, from)?;
            for to in tos {
                succ[f].push(self.lookup(&index, to)?);
            }
        }
        StateGraph::new(succ)
    }

    /// Compiles the log-probability tables.
    pub fn params(&self) -> Result<HmmParams, ModelError> {
        if self.order == 0 {
            return Err(ModelError::InvalidModel("order must be positive".into()));
        }
        let k = self.states.len();
        let index = self.state_index();
        let vocab: HashMap<&str, usize> = self
            .vocabulary
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect();

        let mut explicit: HashMap<Vec<usize>, Vec<f64>> = HashMap::new();
        for (ctx_key, row) in &self.transition_logprobs {
            let ctx = ctx_key
                .split_whitespace()
                .map(|name| {
                    if name == DUMMY_TOKEN {
                        Ok(DUMMY)
                    } else {
                        self.lookup(&index, name)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            if ctx.len() != self.order {
                return Err(ModelError::InvalidModel(format!(
                    "context `{ctx_key}` has {} states, expected {}",
                    ctx.len(),
                    self.order
                )));
            }
            let mut values = vec![f64::NEG_INFINITY; k];
            for (to, lp) in row {
                values[self.lookup(&index, to)?] = *lp;
            }
            explicit.insert(ctx, values);
        }

        let initial = match &self.initial_logprobs {
            Some(map) => {
                let mut v = vec![f64::NEG_INFINITY; k];
                for (name, lp) in map {
                    v[self.lookup(&index, name)?] = *lp;
                }
                Some(v)
            }
            None => None,
        };

        let mut emission = vec![f64::NEG_INFINITY; k * self.vocabulary.len()];
        for (state, row) in &self.emission_logprobs {
            let s = self.lookup(&index, state)?;
            for (tok, lp) in row {
                let w = *vocab
                    .get(tok.as_str())
                    .ok_or_else(|| ModelError::InvalidModel(format!("unknown token `{tok}`")))?;
                emission[s * self.vocabulary.len() + w] = *lp;
            }
        }

        HmmParams::from_fn(k, self.order, self.vocabulary.clone(), emission, |ctx| {
            if let Some(row) = explicit.get(ctx) {
                return row.clone();
            }
            if ctx.iter().all(|&s| s == DUMMY) {
                if let Some(init) = &initial {
                    return init.clone();
                }
            }
            if ctx.contains(&DUMMY) {
                vec![-(k as f64).ln(); k]
            } else {
                vec![f64::NEG_INFINITY; k]
            }
        })
    }
}

/// Compiled order-`n` transition and emission log-probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct HmmParams {
    num_states: usize,
    order: usize,
    vocabulary: Vec<String>,
    transition: Vec<f64>,
    emission: Vec<f64>,
}

impl HmmParams {
    /// `transition_row(ctx)` returns `log P(· | ctx)` for one context;
    /// `emission` is state-major, `num_states * vocabulary.len()`.
    pub fn from_fn<F>(
        num_states: usize,
        order: usize,
        vocabulary: Vec<String>,
        emission: Vec<f64>,
        mut transition_row: F,
    ) -> Result<Self, ModelError>
    where
        F: FnMut(&[usize]) -> Vec<f64>,
    {
        if emission.len() != num_states * vocabulary.len() {
            return Err(ModelError::InvalidModel("emission table has the wrong size".into()));
        }
        let codec = ContextCodec::new(num_states, order);
        let mut transition = Vec::with_capacity(codec.size() * num_states);
        let mut ctx = vec![0; order];
        for key in 0..codec.size() {
            codec.decode_into(key, &mut ctx);
            let row = transition_row(&ctx);
            if row.len() != num_states {
                return Err(ModelError::InvalidModel("transition row has the wrong size".into()));
            }
            transition.extend(row);
        }
        Ok(Self {
            num_states,
            order,
            vocabulary,
            transition,
            emission,
        })
    }

    /// First-order model from dense probability-space tables.
    /// `initial` of `None` means uniform.
    pub fn first_order(
        initial: Option<Vec<f64>>,
        transition: Vec<Vec<f64>>,
        emission: Vec<Vec<f64>>,
    ) -> Result<Self, ModelError> {
        let k = transition.len();
        let v = emission.first().map_or(0, Vec::len);
        let vocabulary = (0..v).map(|w| w.to_string()).collect();
        let emission = emission.iter().flatten().map(|p| p.ln()).collect();
        Self::from_fn(k, 1, vocabulary, emission, |ctx| {
            if ctx[0] == DUMMY {
                match &initial {
                    Some(p) => p.iter().map(|x| x.ln()).collect(),
                    None => vec![-(k as f64).ln(); k],
                }
            } else {
                transition[ctx[0]].iter().map(|x| x.ln()).collect()
            }
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    /// Maps tokens to vocabulary indices.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Vec<usize>, ModelError> {
        let index: HashMap<&str, usize> = self
            .vocabulary
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect();
        tokens
            .iter()
            .map(|t| {
                index
                    .get(t.as_ref())
                    .copied()
                    .ok_or_else(|| ModelError::UnknownToken(t.as_ref().to_string()))
            })
            .collect()
    }

    pub fn transition_logprob(&self, context: &[usize], state: usize) -> f64 {
        let key = ContextCodec::new(self.num_states, self.order).encode(context);
        self.transition[key * self.num_states + state]
    }

    pub fn emission_logprob(&self, state: usize, token: usize) -> f64 {
        self.emission[state * self.vocabulary.len() + token]
    }
}

/// `log P(y_t | context) + log P(w_t | y_t) + offset` over a fixed
/// observation sequence.
#[derive(Debug, Clone)]
pub struct HmmRewards {
    params: Arc<HmmParams>,
    observations: Arc<[usize]>,
    offset: f64,
    codec: ContextCodec,
}

impl HmmRewards {
    /// Builds the oracle without checking signs; use [`hmm_rewards`] for the
    /// checked constructor.
    pub fn unchecked(params: Arc<HmmParams>, observations: Arc<[usize]>, offset: f64) -> Self {
        let codec = ContextCodec::new(params.num_states, params.order);
        Self {
            params,
            observations,
            offset,
            codec,
        }
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn params(&self) -> &Arc<HmmParams> {
        &self.params
    }

    pub fn observations(&self) -> &Arc<[usize]> {
        &self.observations
    }

    pub fn with_offset(&self, offset: f64) -> Self {
        Self::unchecked(self.params.clone(), self.observations.clone(), offset)
    }
}

impl RewardOracle for HmmRewards {
    fn num_states(&self) -> usize {
        self.params.num_states
    }
    fn order(&self) -> usize {
        self.params.order
    }
    fn horizon(&self) -> usize {
        self.observations.len()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        let k = self.params.num_states;
        let key = self.codec.encode(context);
        self.params.transition[key * k + state]
            + self.params.emission[state * self.params.vocabulary.len() + self.observations[time]]
            + self.offset
    }
}

/// Checked HMM reward adapter: every reachable reward must be finite and
/// non-negative after adding `offset`.
pub fn hmm_rewards(
    params: Arc<HmmParams>,
    observations: Arc<[usize]>,
    offset: f64,
    graph: &StateGraph,
) -> Result<HmmRewards, ModelError> {
    if graph.num_states() != params.num_states {
        return Err(ModelError::InvalidModel(format!(
            "graph has {} states, model has {}",
            graph.num_states(),
            params.num_states
        )));
    }
    let oracle = HmmRewards::unchecked(params, observations, offset);
    if let Some((min, time, state)) = min_reachable_reward(&oracle, graph)? {
        if min < 0.0 {
            return Err(ModelError::NegativeReward { time, state, value: min });
        }
    }
    Ok(oracle)
}
