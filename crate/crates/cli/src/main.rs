//! `latdec`: generate models, decode under a latency budget, run sweeps,
//! tabulate bounds and play adversarial instances.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use latency_decode::decoders::PeekConfig;
use latency_decode::harness::{
    deterministic_adversary_report, emit_bounds_csv, generate_synthetic_hmm, load_hmm_instance,
    randomized_adversary_report, run_sweep, write_csv, BoundsRow, DecoderKind, SweepConfig,
    SyntheticSpec,
};
use latency_decode::model::ModelFile;

#[derive(Parser)]
#[command(name = "latdec", version, about = "Online decoding under a latency budget")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic model and an observation sequence.
    Gen(GenArgs),
    /// Decode an observation file and print one label per line.
    Decode(DecodeArgs),
    /// Run decoders over a grid of latencies and seeds, writing CSV.
    Sweep(SweepArgs),
    /// Tabulate every bound over a grid of (L, n, Δ).
    Bounds(BoundsArgs),
    /// Play an adversarial instance against a decoder.
    Adversary(AdversaryArgs),
}

#[derive(Args)]
struct PaddingFlags {
    /// Add L+1 zero-reward steps at both ends (Peek Search only).
    #[arg(long, overrides_with = "no_padding")]
    padding: bool,
    #[arg(long, overrides_with = "padding")]
    no_padding: bool,
}

impl PaddingFlags {
    fn resolve(&self, default: bool) -> bool {
        if self.padding {
            true
        } else if self.no_padding {
            false
        } else {
            default
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, default_value_t = 8)]
    vocab: usize,
    /// Number of observations to sample.
    #[arg(long, default_value_t = 200)]
    length: usize,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Dirichlet concentration of transition rows.
    #[arg(long, default_value_t = 1.0)]
    transition_concentration: f64,
    /// Dirichlet concentration of emission rows.
    #[arg(long, default_value_t = 1.0)]
    emission_concentration: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the model file.
    #[arg(long)]
    model_out: PathBuf,
    /// Where to write the observations, one token per line.
    #[arg(long)]
    observations_out: PathBuf,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    model: PathBuf,
    /// Whitespace-separated observation tokens.
    #[arg(long)]
    observations: PathBuf,
    /// Expected model order; checked against the model file.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "peek_search")]
    decoder: DecoderKind,
    #[arg(long, default_value_t = 0)]
    latency: usize,
    /// Peek Search discount (default: the bound-minimizing value).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    padding: PaddingFlags,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_delimiter = ',', default_values_t = DecoderKind::ALL)]
    decoders: Vec<DecoderKind>,
    #[arg(long = "latency", value_delimiter = ',', required = true)]
    latencies: Vec<usize>,
    #[arg(long = "seed", value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    padding: PaddingFlags,
    /// Write zero in the wall_time_ms column so output is reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Output file (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long = "latency", value_delimiter = ',', required = true)]
    latencies: Vec<usize>,
    #[arg(long = "order", value_delimiter = ',', default_value = "1")]
    orders: Vec<usize>,
    #[arg(long = "diameter", value_delimiter = ',', default_value = "1")]
    diameters: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Exit with status 3 if any formula does not apply.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct AdversaryArgs {
    #[arg(long, default_value = "peek_search")]
    decoder: DecoderKind,
    #[arg(long, default_value_t = 1)]
    latency: usize,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, default_value_t = 1)]
    diameter: usize,
    #[arg(long)]
    gamma: Option<f64>,
    /// Play the randomized hidden-row instance with this ε instead of the
    /// deterministic game.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Number of randomized instances to average over.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Invalid(anyhow::Error),
    Inapplicable(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

fn read_instance(args: &InstanceArgs) -> anyhow::Result<(ModelFile, Vec<String>)> {
    let text = fs::read_to_string(&args.model)
        .with_context(|| format!("reading {}", args.model.display()))?;
    let model = ModelFile::from_json(&text)?;
    if let Some(order) = args.order {
        if order != model.order {
            bail!("model has order {}, --order says {order}", model.order);
        }
    }
    let obs = fs::read_to_string(&args.observations)
        .with_context(|| format!("reading {}", args.observations.display()))?;
    Ok((model, obs.split_whitespace().map(str::to_string).collect()))
}

fn gen(args: GenArgs) -> anyhow::Result<()> {
    let spec = SyntheticSpec {
        num_states: args.states,
        order: args.order,
        vocab_size: args.vocab,
        horizon: args.length,
        transition_concentration: args.transition_concentration,
        emission_concentration: args.emission_concentration,
        edge_density: args.density,
        seed: args.seed,
    };
    let hmm = generate_synthetic_hmm(&spec)?;
    fs::write(&args.model_out, hmm.model.to_json())?;
    let mut obs = hmm.observations.join("\n");
    obs.push('\n');
    fs::write(&args.observations_out, obs)?;
    Ok(())
}

fn decode(args: DecodeArgs) -> anyhow::Result<()> {
    let (model, tokens) = read_instance(&args.instance)?;
    let inst = load_hmm_instance(&model, &tokens)?;
    let peek = PeekConfig {
        latency: args.latency,
        gamma: args.gamma,
        padding: args.padding.resolve(false),
    };
    let trace = args.decoder.decode(&inst.oracle, &inst.graph, &peek, args.seed)?;
    let mut out = io::stdout().lock();
    for &s in trace.labels() {
        writeln!(out, "{}", model.states[s])?;
    }
    eprintln!(
        "{}: total reward {:.6}, log-probability {:.6}",
        trace.decoder,
        trace.total(),
        inst.log_probability(trace.total())
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let (model, tokens) = read_instance(&args.instance)?;
    let inst = load_hmm_instance(&model, &tokens)?;
    let config = SweepConfig {
        decoders: args.decoders,
        latencies: args.latencies,
        seeds: args.seeds,
        gamma: args.gamma,
        padding: args.padding.resolve(true),
        timing: !args.no_timing,
    };
    let reports = run_sweep(&inst.oracle, &inst.graph, inst.offset, &config)?;
    for r in reports.iter().filter(|r| r.is_failed()) {
        eprintln!(
            "{} at L={} seed={}: {}",
            r.decoder,
            r.latency,
            r.seed,
            r.failure.as_deref().unwrap_or_default()
        );
    }
    match args.output {
        Some(path) => write_csv(fs::File::create(path)?, &reports)?,
        None => write_csv(io::stdout().lock(), &reports)?,
    }
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for &l in &args.latencies {
        for &n in &args.orders {
            for &d in &args.diameters {
                rows.push(BoundsRow::compute(l, n, d, args.epsilon).map_err(anyhow::Error::from)?);
            }
        }
    }
    print!("{}", emit_bounds_csv(&rows));
    if args.strict {
        if let Some(r) = rows.iter().find(|r| r.has_inapplicable()) {
            return Err(Failure::Inapplicable(format!(
                "a bound does not apply at L={}, n={}, Δ={}",
                r.latency, r.order, r.diameter
            )));
        }
    }
    Ok(())
}

fn adversary(args: AdversaryArgs) -> anyhow::Result<()> {
    let report = match args.epsilon {
        Some(eps) => randomized_adversary_report(
            args.decoder,
            eps,
            args.diameter,
            args.order,
            args.latency,
            args.trials,
            args.seed,
        )?,
        None => {
            let (report, outcome) = deterministic_adversary_report(
                args.decoder,
                args.latency,
                args.order,
                args.diameter,
                args.gamma,
                args.seed,
            )?;
            eprintln!(
                "a = {:.6}, branch {:?}, r1 = {:.6}, r2 = {:.6}",
                outcome.a, outcome.branch, outcome.r1, outcome.r2
            );
            report
        }
    };
    write_csv(io::stdout().lock(), &[report])?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a).map_err(Failure::from),
        Command::Decode(a) => decode(a).map_err(Failure::from),
        Command::Sweep(a) => sweep(a).map_err(Failure::from),
        Command::Bounds(a) => bounds(a),
        Command::Adversary(a) => adversary(a).map_err(Failure::from),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Inapplicable(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
