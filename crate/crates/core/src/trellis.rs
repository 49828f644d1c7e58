//! Discounted best-path dynamic program over a finite window.
//!
//! Layer `ℓ` holds, for every context of the last `n` states ending at time
//! `start + ℓ`, the best discounted score `Π(ℓ, ·)` of a valid path from the
//! given history and a backpointer to the context it extends. Layer `ℓ` is
//! computed from layer `ℓ - 1` only. Work per layer is `|K|^n` contexts times
//! the successors of each, i.e. `O(|K|^{n+1})`.
//!
//! Exact score ties are resolved toward the lexicographically smallest path,
//! so the first state of the returned path is the lowest-index optimal one.

use std::cmp::Ordering;

use crate::model::{ContextCodec, ContextWindow, RewardOracle, StateGraph};

#[derive(Debug, Clone)]
pub struct TrellisTable {
    codec: ContextCodec,
    order: usize,
    start_time: usize,
    initial_key: usize,
    weights: Vec<f64>,
    scores: Vec<Vec<f64>>,
    backpointers: Vec<Vec<usize>>,
}

const NO_PRED: usize = usize::MAX;

impl TrellisTable {
    /// Runs the DP over times `start_time .. start_time + steps` with step
    /// `ℓ` weighted by `gamma^ℓ`.
    pub fn build<O: RewardOracle + ?Sized>(
        oracle: &O,
        graph: &StateGraph,
        start_time: usize,
        history: &ContextWindow,
        steps: usize,
        gamma: f64,
    ) -> Self {
        let order = oracle.order();
        debug_assert_eq!(history.order(), order);
        let codec = ContextCodec::new(graph.num_states(), order);
        let size = codec.size();
        let initial_key = codec.encode(history.as_slice());
        let weights: Vec<f64> = (0..steps).map(|l| gamma.powi(l as i32)).collect();

        let mut table = Self {
            codec,
            order,
            start_time,
            initial_key,
            weights,
            scores: Vec::with_capacity(steps),
            backpointers: Vec::with_capacity(steps),
        };

        let mut ctx = vec![0; order];
        for layer in 0..steps {
            let time = start_time + layer;
            let weight = table.weights[layer];
            let mut cur = vec![f64::NEG_INFINITY; size];
            let mut back = vec![NO_PRED; size];
            let prev_keys: Vec<(usize, f64)> = if layer == 0 {
                vec![(initial_key, 0.0)]
            } else {
                table.scores[layer - 1]
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.is_finite())
                    .map(|(k, &s)| (k, s))
                    .collect()
            };
            for (key, base) in prev_keys {
                codec.decode_into(key, &mut ctx);
                for s in graph.next_states(codec.last(key)) {
                    let cand = base + weight * oracle.reward(time, s, &ctx);
                    let next = codec.shift(key, s);
                    let better = if cand > cur[next] {
                        true
                    } else if cand == cur[next] {
                        table.compare_prefixes(layer, key, back[next]) == Ordering::Less
                    } else {
                        false
                    };
                    if better {
                        cur[next] = cand;
                        back[next] = key;
                    }
                }
            }
            table.scores.push(cur);
            table.backpointers.push(back);
        }
        table
    }

    pub fn steps(&self) -> usize {
        self.scores.len()
    }

    pub fn start_time(&self) -> usize {
        self.start_time
    }

    /// `Π(ℓ, context)`: best score of a path of `ℓ + 1` steps whose last `n`
    /// states are `context`, or `None` if no valid path ends there.
    pub fn score(&self, layer: usize, context: &[usize]) -> Option<f64> {
        assert_eq!(context.len(), self.order);
        let v = self.scores[layer][self.codec.encode(context)];
        v.is_finite().then_some(v)
    }

    /// All finite scores stored in `layer`.
    pub fn layer_scores(&self, layer: usize) -> impl Iterator<Item = f64> + '_ {
        self.scores[layer].iter().copied().filter(|s| s.is_finite())
    }

    /// Weight applied to step `layer`.
    pub fn weight(&self, layer: usize) -> f64 {
        self.weights[layer]
    }

    /// States of the stored best path ending in `key` at `layer`.
    fn path_to(&self, layer: usize, key: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(layer + 1);
        let mut k = key;
        for l in (0..=layer).rev() {
            out.push(self.codec.last(k));
            k = self.backpointers[l][k];
        }
        debug_assert_eq!(k, self.initial_key);
        out.reverse();
        out
    }

    /// Orders the stored paths reaching two keys of the layer before `layer`.
    fn compare_prefixes(&self, layer: usize, a: usize, b: usize) -> Ordering {
        if layer == 0 || b == NO_PRED {
            return Ordering::Equal;
        }
        if a == b {
            return Ordering::Equal;
        }
        self.path_to(layer - 1, a).cmp(&self.path_to(layer - 1, b))
    }

    /// The lexicographically smallest path with maximum discounted score,
    /// with that score. Empty window gives an empty path and score 0.
    pub fn best(&self) -> (Vec<usize>, f64) {
        let Some(last) = self.scores.last() else {
            return (Vec::new(), 0.0);
        };
        let layer = self.scores.len() - 1;
        let mut best_key = None;
        let mut best_score = f64::NEG_INFINITY;
        let mut best_path: Vec<usize> = Vec::new();
        for (key, &s) in last.iter().enumerate() {
            if !s.is_finite() {
                continue;
            }
            if best_key.is_none() || s > best_score {
                best_key = Some(key);
                best_score = s;
                best_path = self.path_to(layer, key);
            } else if s == best_score {
                let p = self.path_to(layer, key);
                if p < best_path {
                    best_key = Some(key);
                    best_path = p;
                }
            }
        }
        (best_path, best_score)
    }
}
