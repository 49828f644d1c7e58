//! Exhaustive reference implementations and random instance builders shared
//! by the integration tests. Nothing here reuses the library's DP code.

#![allow(dead_code)]

use latency_decode::model::{RewardOracle, RewardTable, StateGraph, DUMMY};
use rand::Rng;

/// Calls `visit` for every state sequence of length `steps` over `k` states,
/// in lexicographic order.
fn for_each_sequence(k: usize, steps: usize, mut visit: impl FnMut(&[usize])) {
    let mut seq = vec![0usize; steps];
    loop {
        visit(&seq);
        let mut i = steps;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
        }
    }
}

/// Discounted score of `seq` placed at `start` after `history` (full label
/// history, not just the last `n`), or `None` if it uses a missing edge.
pub fn discounted_score<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    start: usize,
    history: &[usize],
    seq: &[usize],
    gamma: f64,
) -> Option<f64> {
    let n = oracle.order();
    let mut full: Vec<usize> = history.to_vec();
    let mut total = 0.0;
    let mut weight = 1.0;
    for (l, &s) in seq.iter().enumerate() {
        let prev = full.last().copied().unwrap_or(DUMMY);
        if prev != DUMMY && !graph.has_edge(prev, s) {
            return None;
        }
        let ctx: Vec<usize> = (0..n)
            .map(|j| {
                let back = n - j;
                if full.len() >= back {
                    full[full.len() - back]
                } else {
                    DUMMY
                }
            })
            .collect();
        total += weight * oracle.reward(start + l, s, &ctx);
        weight *= gamma;
        full.push(s);
    }
    Some(total)
}

/// Best discounted continuation by enumeration; ties go to the
/// lexicographically smallest sequence.
pub fn brute_best<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    start: usize,
    history: &[usize],
    steps: usize,
    gamma: f64,
) -> (Vec<usize>, f64) {
    let mut best: Option<(Vec<usize>, f64)> = None;
    for_each_sequence(graph.num_states(), steps, |seq| {
        if let Some(v) = discounted_score(oracle, graph, start, history, seq, gamma) {
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((seq.to_vec(), v));
            }
        }
    });
    best.expect("an ergodic graph has a valid path")
}

/// Largest total reward over all valid full-length paths.
pub fn brute_opt<O: RewardOracle + ?Sized>(oracle: &O, graph: &StateGraph) -> f64 {
    brute_best(oracle, graph, 0, &[], oracle.horizon(), 1.0).1
}

/// Random ergodic graph: self-loops, a Hamiltonian cycle, and extra edges
/// with probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, k: usize, density: f64) -> StateGraph {
    let succ = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j == i || j == (i + 1) % k || rng.random_bool(density))
                .collect()
        })
        .collect();
    StateGraph::new(succ).expect("cycle keeps the graph ergodic")
}

/// Dense random table of rewards in `[lo, hi)`.
pub fn random_rewards<R: Rng>(rng: &mut R, k: usize, n: usize, horizon: usize, lo: f64, hi: f64) -> RewardTable {
    RewardTable::from_fn(k, n, horizon, |_, _, _| rng.random_range(lo..hi))
}

/// Random positive instance on a random ergodic graph.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    k: usize,
    n: usize,
    horizon: usize,
) -> (RewardTable, StateGraph) {
    let density = rng.random_range(0.0..1.0);
    let graph = random_graph(rng, k, density);
    let rewards = random_rewards(rng, k, n, horizon, 0.0, 1.0);
    (rewards, graph)
}

/// Random positive instance on the complete graph (`Δ = 1`).
pub fn random_complete_instance<R: Rng>(rng: &mut R, k: usize, n: usize, horizon: usize) -> (RewardTable, StateGraph) {
    let graph = StateGraph::fully_connected(k);
    let rewards = random_rewards(rng, k, n, horizon, 0.0, 1.0);
    (rewards, graph)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
