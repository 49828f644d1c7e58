use crate::decoders::{
    check_commitment, run_online, viterbi_decode, AuditStats, OnlineDecoder, RunOptions,
};
use crate::model::{EffectiveDiameter, StateGraph};

use super::rewards::AdaptiveMatrix;
use super::{adversary_constant_a, branch_ratios, build_prismatic_polytope, AdversaryError};

/// Which way the decoder went at time 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameBranch {
    /// Kept its first state: the last column pays nothing.
    Stayed,
    /// Moved away: the last column pays `a` everywhere except the two states
    /// it has visited.
    Moved,
}

/// Result of one adversarial game.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioOutcome {
    pub opt: f64,
    pub on: f64,
    pub ratio: f64,
    pub labels: Vec<usize>,
    pub opt_labels: Vec<usize>,
    pub branch: GameBranch,
    pub a: f64,
    /// Floor the decoder is held to if it stays.
    pub r1: f64,
    /// Floor the decoder is held to if it moves.
    pub r2: f64,
    pub audit: AuditStats,
}

/// The adaptive construction on a prism over a triangle.
///
/// The matrix has `L + 3` columns. Columns `0..=L` read `0, 1, a, …, a` for
/// every state. Column `L + 1` is chosen once the decoder's first state
/// `s₀` is known: `s₀` gets 0 and a state at distance `d` from it gets
/// `(n + d - 1)a`. Column `L + 2` depends on the second state `s₁`: all zero
/// if `s₁ = s₀`, else 0 on `s₀` and `s₁` and `a` elsewhere. A state earns its
/// entry only after `n` consecutive visits.
///
/// Column `c` is revealed when the decoder reaches position
/// `c - latency` (or at once if that is negative). If the decoder has not
/// committed the state the rule needs by then, the adversary assumes state
/// 0 for `s₀` and `s₁ = s₀`.
#[derive(Debug, Clone)]
pub struct DeterministicGame {
    latency: usize,
    order: usize,
    delta: usize,
    a: f64,
    graph: StateGraph,
}

impl DeterministicGame {
    pub fn new(latency: usize, order: usize, delta: usize) -> Result<Self, AdversaryError> {
        let graph = build_prismatic_polytope(delta, 3, false)?;
        if order == 0 {
            return Err(AdversaryError::InvalidConfig("order must be positive".into()));
        }
        let effective = EffectiveDiameter::new(delta, order).value();
        let a = adversary_constant_a(latency, effective)?;
        Ok(Self {
            latency,
            order,
            delta,
            a,
            graph,
        })
    }

    /// Replaces the balancing constant with `a`.
    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn graph(&self) -> &StateGraph {
        &self.graph
    }

    pub fn horizon(&self) -> usize {
        self.latency + 3
    }

    fn effective(&self) -> usize {
        EffectiveDiameter::new(self.delta, self.order).value()
    }

    fn column(&self, c: usize, labels: &[usize]) -> Vec<f64> {
        let k = self.graph.num_states();
        let l = self.latency;
        let a = self.a;
        let s0 = labels.first().copied().unwrap_or(0);
        let s1 = labels.get(1).copied().unwrap_or(s0);
        match c {
            0 => vec![0.0; k],
            1 => vec![1.0; k],
            c if c <= l => vec![a; k],
            c if c == l + 1 => self
                .graph
                .distances_from(s0)
                .into_iter()
                .map(|d| match d {
                    Some(0) => 0.0,
                    Some(d) => (self.order + d - 1) as f64 * a,
                    None => unreachable!("polytope is strongly connected"),
                })
                .collect(),
            _ if s1 == s0 => vec![0.0; k],
            _ => (0..k).map(|s| if s == s0 || s == s1 { 0.0 } else { a }).collect(),
        }
    }

    /// Plays the game against `decoder`. The decoder must accept the game's
    /// horizon and state count.
    pub fn play(&self, decoder: &mut dyn OnlineDecoder) -> Result<RatioOutcome, AdversaryError> {
        let horizon = self.horizon();
        let matrix = AdaptiveMatrix::new(horizon, self.graph.num_states(), self.order);
        let lag = decoder.latency();
        let mut reveal = |now: usize, labels: &[usize]| {
            for c in 0..horizon {
                if !matrix.is_revealed(c) && c.saturating_sub(lag) <= now {
                    matrix.reveal(c, self.column(c, labels));
                }
            }
        };
        let trace = run_online(
            decoder,
            &matrix,
            &self.graph,
            RunOptions {
                log_values: true,
                before_position: Some(&mut reveal),
            },
        )?;
        if matrix.premature_lookups() > 0 {
            return Err(AdversaryError::InvalidConfig(
                "decoder read a column before it was revealed".into(),
            ));
        }
        if let Some(log) = &trace.query_log {
            check_commitment(log).map_err(AdversaryError::CommitmentBroken)?;
        }
        let final_matrix = matrix.freeze().ok_or_else(|| {
            AdversaryError::InvalidConfig("game ended with unrevealed columns".into())
        })?;
        let best = viterbi_decode(&final_matrix, &self.graph)?;

        let labels = trace.path.labels.clone();
        let branch = if labels[1] == labels[0] {
            GameBranch::Stayed
        } else {
            GameBranch::Moved
        };
        let (r1, r2) = branch_ratios(self.latency, self.effective(), self.a);
        let (opt, on) = (best.total(), trace.total());
        Ok(RatioOutcome {
            opt,
            on,
            ratio: opt / on,
            labels,
            opt_labels: best.path.labels,
            branch,
            a: self.a,
            r1,
            r2,
            audit: trace.audit,
        })
    }
}

/// Builds the game for `(L, n, Δ)` and plays it against `decoder`.
pub fn play_deterministic_game(
    decoder: &mut dyn OnlineDecoder,
    latency: usize,
    order: usize,
    delta: usize,
) -> Result<RatioOutcome, AdversaryError> {
    DeterministicGame::new(latency, order, delta)?.play(decoder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::{Greedy, PeekSearch, Viterbi};

    #[test]
    fn peek_search_at_unit_latency() {
        let mut d = PeekSearch::new(1, 0.5);
        let out = play_deterministic_game(&mut d, 1, 1, 1).unwrap();
        assert_eq!(out.branch, GameBranch::Stayed);
        assert_eq!(out.on, 1.0);
        assert!(out.ratio >= 2.5 - 1e-9);
        assert!((out.ratio - out.r1).abs() < 1e-12);
    }

    #[test]
    fn offline_player_is_optimal() {
        for n in 1..=3 {
            let game = DeterministicGame::new(3, n, 1).unwrap();
            let mut d = Viterbi::new(game.horizon());
            let out = game.play(&mut d).unwrap();
            assert!((out.ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_ratio_grows_with_a() {
        let mut last = 0.0;
        for a in [1.0, 10.0, 100.0, 1000.0] {
            let game = DeterministicGame::new(1, 1, 1).unwrap().with_a(a);
            let out = game.play(&mut Greedy).unwrap();
            assert_eq!(out.on, 1.0);
            assert!(out.ratio > last);
            last = out.ratio;
        }
        assert!(last > 1000.0);
    }
}
