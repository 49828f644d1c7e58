//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use latency_decode::adversary::DeterministicGame;
use latency_decode::bounds;
use latency_decode::decoders::{
    peek_reset_decode, peek_search_decode, peek_search_step, randomized_peek_search_with_reset,
    reset_point, viterbi_decode, AuditStats, DecodeTrace, Greedy, OnlineDecoder, PeekConfig,
    PeekReset, PeekSearch, RandomizedPeekSearch,
};
use latency_decode::harness::{
    generate_synthetic_hmm, load_hmm_instance, randomized_adversary_report, DecoderKind,
    SyntheticSpec,
};
use latency_decode::model::ContextWindow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{brute_best, brute_opt, random_complete_instance, random_instance, rel_close};

type Outcome = Result<String, String>;

/// Audit totals over every decoding run of the acceptance suite.
#[derive(Default)]
struct Ledger {
    audit: AuditStats,
    runs: u64,
}

impl Ledger {
    fn record(&mut self, trace: &DecodeTrace) {
        self.audit += trace.audit;
        self.runs += 1;
    }

    fn record_all<'a>(&mut self, traces: impl IntoIterator<Item = &'a DecodeTrace>) {
        for t in traces {
            self.record(t);
        }
    }
}

fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// 1. Per-step Peek Search DP score against enumeration of all windows.
fn dp_matches_enumeration(ledger: &mut Ledger) -> Outcome {
    let results: Vec<Result<(DecodeTrace, usize), String>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
            let k = rng.random_range(1..=4);
            let n = rng.random_range(1..=2);
            let l = rng.random_range(0..=5);
            let t = rng.random_range(1..=8);
            let (o, g) = random_instance(&mut rng, k, n, t);
            let gamma = rng.random_range(0.05..=1.0);
            let config = PeekConfig::new(l).with_gamma(gamma);
            let trace = peek_search_decode(&o, &g, &config).map_err(|e| e.to_string())?;
            let labels = trace.labels();
            for now in 0..t {
                let history = &labels[..now];
                let ctx = ContextWindow::from_history(n, history);
                let step = peek_search_step(&o, &g, &config, now, &ctx).map_err(|e| e.to_string())?;
                let steps = l.min(t - 1 - now) + 1;
                let (path, score) = brute_best(&o, &g, now, history, steps, gamma);
                if !rel_close(step.score, score, 1e-9) || step.next != path[0] || step.next != labels[now] {
                    return Err(format!(
                        "instance {i} (K={k}, n={n}, L={l}, T={t}) at {now}: dp {} / {:?} vs enumeration {score} / {path:?}",
                        step.score, step.lookahead
                    ));
                }
            }
            Ok((trace, t))
        })
        .collect();
    let mut steps = 0;
    for r in results {
        let (trace, t) = r?;
        ledger.record(&trace);
        steps += t;
    }
    Ok(format!("200 instances, {steps} decisions"))
}

/// 2. Viterbi total against the exhaustive optimum.
fn viterbi_is_exact(ledger: &mut Ledger) -> Outcome {
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + i);
        let k = rng.random_range(1..=3);
        let n = rng.random_range(1..=2);
        let t = rng.random_range(1..=7);
        let (o, g) = random_instance(&mut rng, k, n, t);
        let trace = viterbi_decode(&o, &g).map_err(|e| e.to_string())?;
        ledger.record(&trace);
        let best = brute_opt(&o, &g);
        if (trace.total() - best).abs() > 1e-9 {
            return Err(format!("instance {i}: viterbi {} vs {best}", trace.total()));
        }
    }
    Ok("200 instances".into())
}

/// 3. Undiscounted Peek Search that sees the whole sequence is optimal.
fn full_lookahead_is_optimal(ledger: &mut Ledger) -> Outcome {
    let mut worst: f64 = 1.0;
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + i);
        let k = rng.random_range(1..=4);
        let n = rng.random_range(1..=2);
        let t = rng.random_range(1..=12);
        let l = t - 1 + rng.random_range(0..=2);
        let (o, g) = random_instance(&mut rng, k, n, t);
        let opt = viterbi_decode(&o, &g).map_err(|e| e.to_string())?;
        let on = peek_search_decode(&o, &g, &PeekConfig::new(l).with_gamma(1.0)).map_err(|e| e.to_string())?;
        ledger.record_all([&opt, &on]);
        let ratio = opt.total() / on.total();
        worst = worst.max(ratio);
        if (ratio - 1.0).abs() > 1e-9 {
            return Err(format!("instance {i}: ratio {ratio}"));
        }
    }
    Ok(format!("50 instances, worst ratio {worst:.12}"))
}

/// 4. Measured ratios stay under the proven upper bounds.
fn upper_bounds_hold(ledger: &mut Ledger) -> Outcome {
    // Peek Search with margins and the bound-minimizing discount.
    let mut worst_peek: f64 = 0.0;
    for l in 1..=10usize {
        let bound = (1.0 + 1.0 / l as f64) * ((l + 1) as f64).powf(1.0 / l as f64);
        let lib_bound = bounds::peek_search_upper_bound(l, 1, 1).map_err(|e| e.to_string())?;
        if !rel_close(bound, lib_bound, 1e-12) {
            return Err(format!("L={l}: closed form {bound} vs library {lib_bound}"));
        }
        let runs: Vec<Result<(f64, DecodeTrace, DecodeTrace), String>> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(4000 + 100 * l as u64 + i);
                let k = rng.random_range(2..=4);
                let t = rng.random_range(10..=40);
                let (o, g) = random_complete_instance(&mut rng, k, 1, t);
                let opt = viterbi_decode(&o, &g).map_err(|e| e.to_string())?;
                let on = peek_search_decode(&o, &g, &PeekConfig::new(l).with_padding(true))
                    .map_err(|e| e.to_string())?;
                Ok((opt.total() / on.total(), opt, on))
            })
            .collect();
        for r in runs {
            let (ratio, opt, on) = r?;
            ledger.record_all([&opt, &on]);
            worst_peek = worst_peek.max(ratio / bound);
            if ratio > bound {
                return Err(format!("peek search L={l}: ratio {ratio} > {bound}"));
            }
        }
    }

    // Peek Reset once its bound is finite.
    type ResetRun = (usize, f64, f64, DecodeTrace, DecodeTrace);
    let mut worst_reset: f64 = 0.0;
    let reset_runs: Vec<Result<ResetRun, String>> = (9..=60usize)
        .into_par_iter()
        .flat_map_iter(|l| (0..100u64).map(move |i| (l, i)))
        .map(|(l, i)| {
            let mut rng = ChaCha8Rng::seed_from_u64(5000 + 1000 * l as u64 + i);
            let k = rng.random_range(2..=3);
            let (o, g) = random_complete_instance(&mut rng, k, 1, 120);
            let opt = viterbi_decode(&o, &g).map_err(|e| e.to_string())?;
            let on = peek_reset_decode(&o, &g, l).map_err(|e| e.to_string())?;
            let bound = 1.0 + 4.0 / (l as f64 - 7.0);
            Ok((l, opt.total() / on.total(), bound, opt, on))
        })
        .collect();
    for r in reset_runs {
        let (l, ratio, bound, opt, on) = r?;
        ledger.record_all([&opt, &on]);
        worst_reset = worst_reset.max(ratio / bound);
        if ratio > bound {
            return Err(format!("peek reset L={l}: ratio {ratio} > {bound}"));
        }
    }

    // Randomized Peek Search: mean over 1000 seeds per instance. Only the
    // reset offset depends on the seed, so each offset is decoded once.
    let mut worst_rand: f64 = 0.0;
    for l in 1..=10usize {
        let bound = 1.0 + 1.0 / l as f64;
        for i in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(6000 + 100 * l as u64 + i);
            let k = rng.random_range(2..=4);
            let t = rng.random_range(10..=40);
            let (o, g) = random_complete_instance(&mut rng, k, 1, t);
            let opt = viterbi_decode(&o, &g).map_err(|e| e.to_string())?;
            ledger.record(&opt);
            let mut by_reset = Vec::with_capacity(l + 1);
            for reset in 1..=l + 1 {
                let on = randomized_peek_search_with_reset(&o, &g, l, reset).map_err(|e| e.to_string())?;
                ledger.record(&on);
                by_reset.push(opt.total() / on.total());
            }
            let ratios: Vec<f64> = (0..1000u64).map(|seed| by_reset[reset_point(seed, l) - 1]).collect();
            let (mean, sem) = mean_and_sem(&ratios);
            worst_rand = worst_rand.max(mean / bound);
            if mean > bound + 3.0 * sem + 1e-12 {
                return Err(format!(
                    "randomized L={l} instance {i}: mean ratio {mean} > {bound} + 3·{sem}"
                ));
            }
        }
    }
    Ok(format!(
        "max ratio/bound: peek search {worst_peek:.4}, peek reset {worst_reset:.4}, randomized {worst_rand:.4}"
    ))
}

/// 5. Exact constants and the two forms of the deterministic lower bound.
fn known_constants(_: &mut Ledger) -> Outcome {
    let four = bounds::peek_search_upper_bound(1, 1, 1).map_err(|e| e.to_string())?;
    if four != 4.0 {
        return Err(format!("peek search bound at L=1 is {four:.17}"));
    }
    let two_half = bounds::deterministic_lower_bound(1, 1, 1).map_err(|e| e.to_string())?;
    if two_half != 2.5 {
        return Err(format!("deterministic lower bound at L=1 is {two_half:.17}"));
    }
    let mut worst: f64 = 0.0;
    for l in 1..=10 {
        for n in 1..=10 {
            for d in 1..=10 {
                let a = bounds::deterministic_lower_bound(l, n, d).map_err(|e| e.to_string())?;
                let b = bounds::deterministic_lower_bound_expanded(l, n, d).map_err(|e| e.to_string())?;
                let rel = (a - b).abs() / a.abs();
                worst = worst.max(rel);
                if rel > 1e-12 {
                    return Err(format!("forms differ at L={l}, n={n}, Δ={d}: {a} vs {b}"));
                }
            }
        }
    }
    Ok(format!("4 and 2.5 exact; forms agree to {worst:.1e} on 1000 points"))
}

/// 6. Every decoder is held to the adversary's floor.
fn adversary_floor(ledger: &mut Ledger) -> Outcome {
    let mut tightest = f64::INFINITY;
    let mut games = 0;
    for n in 1..=2usize {
        for l in 1..=4usize {
            let game = DeterministicGame::new(l, n, 1).map_err(|e| e.to_string())?;
            let gamma = PeekConfig::new(l)
                .resolve_gamma(n, game.graph().diameter())
                .map_err(|e| e.to_string())?
                .value;
            let mut players: Vec<Box<dyn OnlineDecoder>> = vec![
                Box::new(PeekSearch::new(l, gamma)),
                Box::new(PeekReset::new(l).map_err(|e| e.to_string())?),
                Box::new(Greedy),
            ];
            for reset in 1..=l + 1 {
                players.push(Box::new(RandomizedPeekSearch::new(l, reset).map_err(|e| e.to_string())?));
            }
            for mut p in players {
                let out = game.play(p.as_mut()).map_err(|e| e.to_string())?;
                ledger.audit += out.audit;
                ledger.runs += 1;
                games += 1;
                let floor = out.r1.min(out.r2);
                tightest = tightest.min(out.ratio - floor);
                if out.ratio < floor - 1e-9 {
                    return Err(format!(
                        "{} at n={n}, L={l}: ratio {} below floor {floor}",
                        p.name(),
                        out.ratio
                    ));
                }
            }
        }
    }
    Ok(format!("{games} games, smallest margin over floor {tightest:.3e}"))
}

/// 7. Randomized Peek Search cannot beat `L + εn` in expectation.
fn randomized_adversary_ceiling(ledger: &mut Ledger) -> Outcome {
    let report = randomized_adversary_report(DecoderKind::RandomizedPeekSearch, 0.5, 1, 1, 2, 2000, 7)
        .map_err(|e| e.to_string())?;
    ledger.audit += report.audit;
    ledger.runs += 2000;
    if report.opt != 3.0 {
        return Err(format!("OPT is {}, expected 3", report.opt));
    }
    if report.on > 2.5 + 0.05 {
        return Err(format!("mean reward {} exceeds 2.55", report.on));
    }
    Ok(format!("mean reward {:.4} over 2000 trials, OPT {}", report.on, report.opt))
}

/// 9. Agreement with Viterbi rises toward 1 as the latency grows.
fn agreement_trend(ledger: &mut Ledger) -> Outcome {
    let latencies = [0usize, 1, 2, 4, 8, 16];
    let per_seed: Vec<Result<Vec<(f64, DecodeTrace)>, String>> = (0..50u64)
        .into_par_iter()
        .map(|seed| {
            let spec = SyntheticSpec {
                transition_concentration: 0.5,
                emission_concentration: 0.5,
                ..SyntheticSpec::new(4, 1, 6, 300, 9000 + seed)
            };
            let hmm = generate_synthetic_hmm(&spec).map_err(|e| e.to_string())?;
            let inst = load_hmm_instance(&hmm.model, &hmm.observations).map_err(|e| e.to_string())?;
            let reference = viterbi_decode(&inst.oracle, &inst.graph).map_err(|e| e.to_string())?;
            let mut out = Vec::new();
            for &l in &latencies {
                let trace = peek_search_decode(&inst.oracle, &inst.graph, &PeekConfig::new(l))
                    .map_err(|e| e.to_string())?;
                let same = trace
                    .labels()
                    .iter()
                    .zip(reference.labels())
                    .filter(|(a, b)| a == b)
                    .count();
                out.push((same as f64 / reference.labels().len() as f64, trace));
            }
            out.push((1.0, reference));
            Ok(out)
        })
        .collect();
    let mut columns = vec![Vec::new(); latencies.len()];
    for r in per_seed {
        for (j, (agree, trace)) in r?.into_iter().enumerate() {
            ledger.record(&trace);
            if j < latencies.len() {
                columns[j].push(agree);
            }
        }
    }
    let stats: Vec<(f64, f64)> = columns.iter().map(|c| mean_and_sem(c)).collect();
    for w in 1..stats.len() {
        let (prev, prev_sem) = stats[w - 1];
        let (cur, cur_sem) = stats[w];
        if cur < prev - 3.0 * (prev_sem + cur_sem) {
            return Err(format!(
                "mean agreement fell from {prev:.4} at L={} to {cur:.4} at L={}",
                latencies[w - 1],
                latencies[w]
            ));
        }
    }
    let (first, _) = stats[0];
    let (last, _) = stats[stats.len() - 1];
    if last <= first || last < 0.95 {
        return Err(format!("agreement {first:.4} at L=0, {last:.4} at L=16"));
    }
    let shape: Vec<String> = latencies
        .iter()
        .zip(&stats)
        .map(|(l, (m, _))| format!("L={l}:{m:.3}"))
        .collect();
    Ok(format!(
        "mean agreement over 50 seeds {}; genome-scale numbers need an external dataset and are not reproduced",
        shape.join(" ")
    ))
}

fn main() -> ExitCode {
    type Criterion = fn(&mut Ledger) -> Outcome;
    let criteria: [(&str, Criterion); 8] = [
        ("1 dp matches enumeration", dp_matches_enumeration),
        ("2 viterbi exactness", viterbi_is_exact),
        ("3 full lookahead optimality", full_lookahead_is_optimal),
        ("4 upper bounds hold", upper_bounds_hold),
        ("5 known constants", known_constants),
        ("6 adversary floor", adversary_floor),
        ("7 randomized adversary ceiling", randomized_adversary_ceiling),
        ("9 synthetic agreement trend", agreement_trend),
    ];
    let mut ledger = Ledger::default();
    let mut failed = 0;
    let mut lines = Vec::new();
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = run(&mut ledger);
        let secs = started.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(detail) => format!("PASS criterion {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                format!("FAIL criterion {name} ({secs:.2}s): {detail}")
            }
        };
        println!("{line}");
        lines.push(line);
    }
    let audit_ok = ledger.audit.violations == 0;
    if !audit_ok {
        failed += 1;
    }
    println!(
        "{} criterion 8 latency audit: {} violations over {} runs and {} reward lookups",
        if audit_ok { "PASS" } else { "FAIL" },
        ledger.audit.violations,
        ledger.runs,
        ledger.audit.queries
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all criteria passed");
        ExitCode::SUCCESS
    }
}
