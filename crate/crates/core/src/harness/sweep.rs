use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adversary::{randomized_adversary_instance, DeterministicGame, RatioOutcome};
use crate::bounds;
use crate::decoders::{run_online, viterbi_decode, AuditStats, PeekConfig, RunOptions};
use crate::model::{RewardOracle, StateGraph};

use super::{DecoderKind, HarnessError};

/// One experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub decoder: String,
    pub latency: usize,
    /// Discount used; `None` for decoders that do not plan ahead.
    pub gamma: Option<f64>,
    pub seed: u64,
    pub opt: f64,
    pub on: f64,
    /// `OPT / ON`.
    pub ratio: f64,
    /// Fraction of positions whose label matches the reference path.
    pub agreement: f64,
    /// Proven ratio for this decoder and latency, if any applies.
    pub bound: Option<f64>,
    pub wall_time_ms: f64,
    /// Per-step reward shift; see [`RatioReport::log_probability`].
    pub offset: f64,
    pub horizon: usize,
    pub audit: AuditStats,
    /// Set when the decoder failed on this cell; numeric fields are NaN.
    pub failure: Option<String>,
}

impl RatioReport {
    /// `ON - T·p`: the decoder's total with the reward shift undone.
    pub fn log_probability(&self) -> f64 {
        self.on - self.horizon as f64 * self.offset
    }

    /// `OPT - T·p`.
    pub fn opt_log_probability(&self) -> f64 {
        self.opt - self.horizon as f64 * self.offset
    }

    pub fn is_failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// What [`run_sweep`] runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub decoders: Vec<DecoderKind>,
    pub latencies: Vec<usize>,
    /// Seeds for randomized decoders. Deterministic decoders run once and
    /// their row is repeated for each seed.
    pub seeds: Vec<u64>,
    /// Peek Search discount; `None` picks the default for each latency.
    pub gamma: Option<f64>,
    /// Zero-reward margins for Peek Search.
    pub padding: bool,
    /// Record wall-clock time per cell. Off gives `wall_time_ms = 0` and
    /// byte-reproducible output.
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(decoders: Vec<DecoderKind>, latencies: Vec<usize>) -> Self {
        Self {
            decoders,
            latencies,
            seeds: vec![0],
            gamma: None,
            padding: false,
            timing: true,
        }
    }
}

fn ratio(opt: f64, on: f64) -> f64 {
    if opt == on {
        1.0
    } else {
        opt / on
    }
}

fn agreement(labels: &[usize], reference: &[usize]) -> f64 {
    if reference.is_empty() {
        return 1.0;
    }
    let same = labels.iter().zip(reference).filter(|(a, b)| a == b).count();
    same as f64 / reference.len() as f64
}

struct Reference<'a> {
    opt: f64,
    labels: &'a [usize],
    offset: f64,
    order: usize,
    diameter: usize,
}

fn run_cell<O: RewardOracle + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    reference: &Reference<'_>,
    kind: DecoderKind,
    peek: &PeekConfig,
    seed: u64,
    timing: bool,
) -> RatioReport {
    let mut report = RatioReport {
        decoder: kind.name().to_string(),
        latency: peek.latency,
        gamma: None,
        seed,
        opt: reference.opt,
        on: f64::NAN,
        ratio: f64::NAN,
        agreement: f64::NAN,
        bound: kind.bound(peek, reference.order, reference.diameter),
        wall_time_ms: 0.0,
        offset: reference.offset,
        horizon: oracle.horizon(),
        audit: AuditStats::default(),
        failure: None,
    };
    let started = Instant::now();
    let outcome = kind
        .gamma(peek, reference.order, reference.diameter)
        .and_then(|g| kind.decode(oracle, graph, peek, seed).map(|t| (g, t)));
    if timing {
        report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    }
    match outcome {
        Ok((gamma, trace)) => {
            report.gamma = gamma;
            report.on = trace.total();
            report.ratio = ratio(reference.opt, report.on);
            report.agreement = agreement(trace.labels(), reference.labels);
            report.audit = trace.audit;
        }
        Err(e) => report.failure = Some(e.to_string()),
    }
    report
}

/// Runs every decoder × latency × seed cell on one instance.
///
/// Viterbi runs once up front to fix OPT and the reference labels. Cells
/// run in parallel; a failing cell is reported with `failure` set rather
/// than aborting the sweep. Rows come back sorted by (decoder, L, seed).
pub fn run_sweep<O: RewardOracle + Sync + ?Sized>(
    oracle: &O,
    graph: &StateGraph,
    offset: f64,
    config: &SweepConfig,
) -> Result<Vec<RatioReport>, HarnessError> {
    if config.seeds.is_empty() {
        return Err(HarnessError::InvalidInput("sweep needs at least one seed".into()));
    }
    let best = viterbi_decode(oracle, graph)?;
    let reference = Reference {
        opt: best.total(),
        labels: best.labels(),
        offset,
        order: oracle.order(),
        diameter: graph.diameter(),
    };

    let mut jobs = Vec::new();
    for &kind in &config.decoders {
        for &latency in &config.latencies {
            if kind.is_randomized() {
                jobs.extend(config.seeds.iter().map(|&s| (kind, latency, s)));
            } else {
                jobs.push((kind, latency, config.seeds[0]));
            }
        }
    }
    let cells: Vec<RatioReport> = jobs
        .into_par_iter()
        .map(|(kind, latency, seed)| {
            let peek = PeekConfig {
                latency,
                gamma: config.gamma,
                padding: config.padding,
            };
            run_cell(oracle, graph, &reference, kind, &peek, seed, config.timing)
        })
        .collect();

    let mut reports = Vec::with_capacity(cells.len() * config.seeds.len());
    for cell in cells {
        let randomized = cell.decoder == DecoderKind::RandomizedPeekSearch.name();
        if randomized {
            reports.push(cell);
        } else {
            for &seed in &config.seeds {
                reports.push(RatioReport { seed, ..cell.clone() });
            }
        }
    }
    reports.sort_by(|a, b| (&a.decoder, a.latency, a.seed).cmp(&(&b.decoder, b.latency, b.seed)));
    Ok(reports)
}

/// Plays the adaptive deterministic game against `kind`.
pub fn deterministic_adversary_report(
    kind: DecoderKind,
    latency: usize,
    order: usize,
    delta: usize,
    gamma: Option<f64>,
    seed: u64,
) -> Result<(RatioReport, RatioOutcome), HarnessError> {
    let game = DeterministicGame::new(latency, order, delta)?;
    let peek = PeekConfig {
        latency,
        gamma,
        padding: false,
    };
    let diameter = game.graph().diameter();
    let mut decoder = kind.build(&peek, order, diameter, game.horizon(), seed)?;
    let out = game.play(decoder.as_mut())?;
    let report = RatioReport {
        decoder: kind.name().to_string(),
        latency,
        gamma: kind.gamma(&peek, order, diameter)?,
        seed,
        opt: out.opt,
        on: out.on,
        ratio: ratio(out.opt, out.on),
        agreement: agreement(&out.labels, &out.opt_labels),
        bound: Some(out.r1.min(out.r2)),
        wall_time_ms: 0.0,
        offset: 0.0,
        horizon: game.horizon(),
        audit: out.audit,
        failure: None,
    };
    Ok((report, out))
}

/// Runs `kind` on `trials` hidden-row instances and reports the mean reward.
///
/// Trial `i` draws its instance seed and decoder seed from a generator
/// seeded with `seed`. `agreement` is the mean fraction of steps spent on
/// the hidden row; `bound` is the randomized lower bound.
pub fn randomized_adversary_report(
    kind: DecoderKind,
    epsilon: f64,
    delta: usize,
    order: usize,
    latency: usize,
    trials: usize,
    seed: u64,
) -> Result<RatioReport, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::InvalidInput("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<(u64, u64)> = (0..trials).map(|_| (rng.random(), rng.random())).collect();
    let peek = PeekConfig {
        latency,
        gamma: None,
        padding: false,
    };
    let mut total_on = 0.0;
    let mut total_agree = 0.0;
    let mut audit = AuditStats::default();
    let mut opt = 0.0;
    let mut gamma = None;
    for (inst_seed, alg_seed) in seeds {
        let inst = randomized_adversary_instance(epsilon, delta, order, latency, inst_seed)?;
        let diameter = inst.graph.diameter();
        gamma = kind.gamma(&peek, order, diameter)?;
        let mut decoder = kind.build(&peek, order, diameter, latency + 2, alg_seed)?;
        let trace = run_online(decoder.as_mut(), &inst.oracle, &inst.graph, RunOptions::default())?;
        total_on += trace.total();
        total_agree += agreement(trace.labels(), &vec![inst.secret; latency + 2]);
        audit += trace.audit;
        opt = inst.opt;
    }
    let on = total_on / trials as f64;
    Ok(RatioReport {
        decoder: kind.name().to_string(),
        latency,
        gamma,
        seed,
        opt,
        on,
        ratio: ratio(opt, on),
        agreement: total_agree / trials as f64,
        bound: bounds::randomized_lower_bound(latency, order, delta, epsilon).ok(),
        wall_time_ms: 0.0,
        offset: 0.0,
        horizon: latency + 2,
        audit,
        failure: None,
    })
}
