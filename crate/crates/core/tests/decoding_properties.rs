mod common;

use latency_decode::decoders::{
    greedy_decode, peek_reset_decode, peek_search_decode, randomized_peek_search_decode,
    run_online, viterbi_decode, DecodeError, OnlineDecoder, PeekConfig, Plan, RunOptions,
};
use latency_decode::model::{
    positivize_rewards, ContextWindow, DecodePath, RewardOracle, RewardTable, StateGraph,
};
use latency_decode::trellis::TrellisTable;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_best, random_graph, random_instance, random_rewards, rel_close};

/// `(seed, K, n, T)` for a random instance.
fn instance_params() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 1usize..=3, 1usize..=2, 1usize..=7)
}

fn build(seed: u64, k: usize, n: usize, t: usize) -> (RewardTable, StateGraph) {
    random_instance(&mut ChaCha8Rng::seed_from_u64(seed), k, n, t)
}

fn all_decoders<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    latency: usize,
    seed: u64,
) -> Vec<Result<latency_decode::decoders::DecodeTrace, DecodeError>> {
    vec![
        greedy_decode(oracle, graph),
        viterbi_decode(oracle, graph),
        peek_search_decode(oracle, graph, &PeekConfig::new(latency)),
        peek_search_decode(oracle, graph, &PeekConfig::new(latency).with_padding(true)),
        peek_reset_decode(oracle, graph, latency.max(1)),
        randomized_peek_search_decode(oracle, graph, latency.max(1), seed),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trellis_matches_enumeration(
        (seed, k, n, t) in instance_params(),
        start_frac in 0.0f64..1.0,
        gamma in 0.05f64..=1.0,
    ) {
        let (o, g) = build(seed, k, n, t);
        let start = ((t as f64) * start_frac) as usize;
        // A valid history of length `start` taken from the optimal path.
        let history: Vec<usize> = brute_best(&o, &g, 0, &[], t, 1.0).0[..start].to_vec();
        let steps = t - start;
        let table = TrellisTable::build(&o, &g, start, &ContextWindow::from_history(n, &history), steps, gamma);
        let (path, score) = table.best();
        let (bpath, bscore) = brute_best(&o, &g, start, &history, steps, gamma);
        prop_assert!(rel_close(score, bscore, 1e-9), "{score} vs {bscore}");
        prop_assert_eq!(path, bpath);
    }

    #[test]
    fn positivizing_preserves_the_optimal_path(
        (seed, k, n, t) in instance_params(),
        lo in -5.0f64..0.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, k, 0.5);
        let raw = random_rewards(&mut rng, k, n, t, lo, 1.0);
        let raw_best = viterbi_decode(&raw, &g).unwrap();
        let (shifted, p) = positivize_rewards(raw.clone(), &g).unwrap();
        prop_assert!(p >= 0.0);
        let best = viterbi_decode(&shifted, &g).unwrap();
        prop_assert_eq!(best.labels(), raw_best.labels());
        prop_assert!(rel_close(best.total(), raw_best.total() + p * t as f64, 1e-9));
    }

    #[test]
    fn decoders_respect_latency_and_edges(
        (seed, k, n, t) in instance_params(),
        latency in 0usize..=6,
    ) {
        let (o, g) = build(seed, k, n, t);
        let opt = viterbi_decode(&o, &g).unwrap().total();
        for trace in all_decoders(&o, &g, latency, seed) {
            let trace = trace.unwrap();
            prop_assert_eq!(trace.audit.violations, 0);
            prop_assert_eq!(trace.labels().len(), t);
            let rescored = DecodePath::score(trace.labels().to_vec(), &o, &g).unwrap();
            prop_assert_eq!(rescored.total, trace.total());
            prop_assert!(trace.total() <= opt + 1e-9 * opt.max(1.0), "{} beat OPT", trace.decoder);
        }
    }

    #[test]
    fn decoding_is_reproducible(
        (seed, k, n, t) in instance_params(),
        latency in 0usize..=4,
    ) {
        let (o, g) = build(seed, k, n, t);
        let first: Vec<Vec<usize>> = all_decoders(&o, &g, latency, seed)
            .into_iter()
            .map(|r| r.unwrap().labels().to_vec())
            .collect();
        let second: Vec<Vec<usize>> = all_decoders(&o, &g, latency, seed)
            .into_iter()
            .map(|r| r.unwrap().labels().to_vec())
            .collect();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn peek_search_steps_follow_their_own_lookahead(
        (seed, k, n, t) in instance_params(),
        latency in 0usize..=4,
    ) {
        let (o, g) = build(seed, k, n, t);
        let trace = peek_search_decode(&o, &g, &PeekConfig::new(latency)).unwrap();
        prop_assert_eq!(trace.recompute_times.clone(), (0..t).collect::<Vec<_>>());
        for (i, choice) in trace.per_step_choices.iter().enumerate() {
            prop_assert_eq!(choice[0], trace.labels()[i]);
            prop_assert_eq!(choice.len(), latency.min(t - 1 - i) + 1);
        }
    }
}

/// Reads one step further than it declares.
struct Cheater;

impl OnlineDecoder for Cheater {
    fn name(&self) -> &'static str {
        "cheater"
    }
    fn latency(&self) -> usize {
        1
    }
    fn decide(
        &mut self,
        now: usize,
        history: &[usize],
        oracle: &dyn RewardOracle,
        graph: &StateGraph,
    ) -> Result<Plan, DecodeError> {
        let ctx = ContextWindow::from_history(oracle.order(), history);
        if now + 2 < oracle.horizon() {
            oracle.reward(now + 2, 0, ctx.as_slice());
        }
        Ok(Plan::single(vec![graph.next_states(ctx.last()).next().unwrap()]))
    }
}

#[test]
fn peeking_past_the_window_is_rejected() {
    let g = StateGraph::fully_connected(2);
    let o = RewardTable::from_fn(2, 1, 5, |_, _, _| 1.0);
    let err = run_online(&mut Cheater, &o, &g, RunOptions::default()).unwrap_err();
    assert_eq!(err, DecodeError::LatencyViolation { position: 0, time: 2 });
}

#[test]
fn zero_latency_peek_search_is_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (o, g) = random_instance(&mut rng, 3, 2, 9);
        let a = peek_search_decode(&o, &g, &PeekConfig::new(0)).unwrap();
        let b = greedy_decode(&o, &g).unwrap();
        assert_eq!(a.labels(), b.labels());
    }
}

#[test]
fn invalid_gamma_is_rejected() {
    let g = StateGraph::fully_connected(2);
    let o = RewardTable::from_fn(2, 1, 3, |_, _, _| 1.0);
    for gamma in [0.0, -0.5, 1.5, f64::NAN] {
        assert!(matches!(
            peek_search_decode(&o, &g, &PeekConfig::new(1).with_gamma(gamma)),
            Err(DecodeError::InvalidConfig(_))
        ));
    }
}

#[test]
fn padding_does_not_change_rewards_of_real_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (o, g) = random_instance(&mut rng, 3, 2, 10);
    let padded = peek_search_decode(&o, &g, &PeekConfig::new(3).with_padding(true)).unwrap();
    assert_eq!(padded.labels().len(), 10);
    let rescored = DecodePath::score(padded.labels().to_vec(), &o, &g).unwrap();
    assert_eq!(rescored.total, padded.total());
}
