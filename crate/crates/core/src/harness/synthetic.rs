use std::collections::{BTreeMap, BTreeSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;

use crate::model::{contexts_at, ModelError, ModelFile, StateGraph, DUMMY, DUMMY_TOKEN};

use super::HarnessError;

const MAX_ATTEMPTS: usize = 100;

/// Parameters of a random HMM.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub num_states: usize,
    pub order: usize,
    pub vocab_size: usize,
    pub horizon: usize,
    /// Symmetric Dirichlet concentration for transition rows.
    pub transition_concentration: f64,
    /// Symmetric Dirichlet concentration for emission rows.
    pub emission_concentration: f64,
    /// Probability that each non-loop edge is present; 1.0 is complete.
    pub edge_density: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(num_states: usize, order: usize, vocab_size: usize, horizon: usize, seed: u64) -> Self {
        Self {
            num_states,
            order,
            vocab_size,
            horizon,
            transition_concentration: 1.0,
            emission_concentration: 1.0,
            edge_density: 1.0,
            seed,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::InvalidInput(msg.to_string()));
        if self.num_states == 0 || self.order == 0 || self.vocab_size == 0 {
            return bad("states, order and vocabulary size must be positive");
        }
        if !(self.transition_concentration > 0.0 && self.emission_concentration > 0.0) {
            return bad("concentrations must be positive");
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return bad("edge density must lie in [0, 1]");
        }
        Ok(())
    }
}

/// A generated model with a sampled observation sequence.
#[derive(Debug, Clone)]
pub struct SyntheticHmm {
    pub graph: StateGraph,
    pub model: ModelFile,
    pub observations: Vec<String>,
    /// The hidden state sequence that produced `observations`.
    pub hidden: Vec<usize>,
}

fn state_name(s: usize) -> String {
    format!("s{s}")
}

fn context_name(ctx: &[usize]) -> String {
    ctx.iter()
        .map(|&s| if s == DUMMY { DUMMY_TOKEN.to_string() } else { state_name(s) })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Symmetric Dirichlet sample of dimension `dim`, kept strictly positive.
fn dirichlet<R: Rng>(rng: &mut R, dim: usize, alpha: f64) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("positive concentration");
    let mut v: Vec<f64> = (0..dim).map(|_| gamma.sample(rng).max(f64::MIN_POSITIVE)).collect();
    let sum: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= sum);
    v
}

fn random_graph<R: Rng>(rng: &mut R, spec: &SyntheticSpec) -> Result<StateGraph, HarnessError> {
    let k = spec.num_states;
    for _ in 0..MAX_ATTEMPTS {
        let successors: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j == i || rng.random_bool(spec.edge_density))
                    .collect()
            })
            .collect();
        match StateGraph::new(successors) {
            Ok(g) => return Ok(g),
            Err(ModelError::NotErgodic { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(HarnessError::NotErgodic {
        attempts: MAX_ATTEMPTS,
        density: spec.edge_density,
    })
}

/// Samples a random order-`n` HMM and an observation sequence from it.
///
/// The graph keeps every self-loop and each other edge with probability
/// `edge_density`, and is redrawn until it is ergodic. Each reachable
/// context gets a Dirichlet transition row over the successors of its last
/// state (all states after an all-dummy context); each state gets a
/// Dirichlet emission row. Output is a pure function of `spec`.
pub fn generate_synthetic_hmm(spec: &SyntheticSpec) -> Result<SyntheticHmm, HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = random_graph(&mut rng, spec)?;
    let k = spec.num_states;
    let n = spec.order;

    let mut contexts = BTreeSet::new();
    for t in 0..=n {
        contexts.extend(contexts_at(&graph, n, t));
    }
    let mut rows: BTreeMap<Vec<usize>, Vec<(usize, f64)>> = BTreeMap::new();
    for ctx in contexts {
        let last = ctx.last().copied().unwrap_or(DUMMY);
        let next: Vec<usize> = graph.next_states(last).collect();
        let probs = dirichlet(&mut rng, next.len(), spec.transition_concentration);
        rows.insert(ctx, next.into_iter().zip(probs).collect());
    }
    let emissions: Vec<Vec<f64>> = (0..k)
        .map(|_| dirichlet(&mut rng, spec.vocab_size, spec.emission_concentration))
        .collect();

    let vocabulary: Vec<String> = (0..spec.vocab_size).map(|w| format!("w{w}")).collect();
    let mut hidden = Vec::with_capacity(spec.horizon);
    let mut observations = Vec::with_capacity(spec.horizon);
    let mut ctx = vec![DUMMY; n];
    for _ in 0..spec.horizon {
        let row = &rows[&ctx];
        let pick = WeightedIndex::new(row.iter().map(|&(_, p)| p)).expect("valid row");
        let s = row[pick.sample(&mut rng)].0;
        let emit = WeightedIndex::new(&emissions[s]).expect("valid row");
        observations.push(vocabulary[emit.sample(&mut rng)].clone());
        hidden.push(s);
        ctx.rotate_left(1);
        ctx[n - 1] = s;
    }

    let model = ModelFile {
        states: (0..k).map(state_name).collect(),
        order: n,
        edges: Some(
            (0..k)
                .map(|s| (state_name(s), graph.successors(s).iter().map(|&t| state_name(t)).collect()))
                .collect(),
        ),
        initial_logprobs: None,
        transition_logprobs: rows
            .iter()
            .map(|(ctx, row)| {
                let entries = row.iter().map(|&(s, p)| (state_name(s), p.ln())).collect();
                (context_name(ctx), entries)
            })
            .collect(),
        emission_logprobs: emissions
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let entries = vocabulary.iter().cloned().zip(row.iter().map(|p| p.ln())).collect();
                (state_name(s), entries)
            })
            .collect(),
        vocabulary,
    };
    Ok(SyntheticHmm {
        graph,
        model,
        observations,
        hidden,
    })
}
