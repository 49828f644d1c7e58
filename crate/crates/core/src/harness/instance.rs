use std::sync::Arc;

use crate::model::{hmm_rewards, positivize_rewards, HmmRewards, ModelFile, StateGraph};

use super::HarnessError;

/// A model, an observation sequence and the shifted rewards decoders run on.
#[derive(Debug, Clone)]
pub struct HmmInstance {
    pub graph: StateGraph,
    pub oracle: HmmRewards,
    /// Per-step shift `p` added to every log-probability.
    pub offset: f64,
}

impl HmmInstance {
    /// Undoes the shift: a total reward as a log-probability.
    pub fn log_probability(&self, total: f64) -> f64 {
        total - self.offset * self.oracle.observations().len() as f64
    }
}

/// Compiles `model`, encodes `tokens` and shifts rewards to be non-negative.
pub fn load_hmm_instance<S: AsRef<str>>(model: &ModelFile, tokens: &[S]) -> Result<HmmInstance, HarnessError> {
    if tokens.is_empty() {
        return Err(HarnessError::InvalidInput("observation sequence is empty".into()));
    }
    let graph = model.graph()?;
    let params = Arc::new(model.params()?);
    let observations: Arc<[usize]> = params.encode(tokens)?.into();
    let raw = HmmRewards::unchecked(params.clone(), observations.clone(), 0.0);
    let (_, offset) = positivize_rewards(raw, &graph)?;
    let oracle = hmm_rewards(params, observations, offset, &graph)?;
    Ok(HmmInstance { graph, oracle, offset })
}
