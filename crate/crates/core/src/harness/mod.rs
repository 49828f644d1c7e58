//! Experiment plumbing: synthetic models, latency sweeps, adversary reports
//! and CSV output.

mod csv;
mod decoder;
mod instance;
mod sweep;
mod synthetic;

use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::bounds::BoundError;
use crate::decoders::DecodeError;
use crate::model::ModelError;

pub use self::csv::{emit_bounds_csv, emit_csv, write_csv, BoundsRow, CSV_HEADER};
pub use decoder::DecoderKind;
pub use instance::{load_hmm_instance, HmmInstance};
pub use sweep::{
    deterministic_adversary_report, randomized_adversary_report, run_sweep, RatioReport,
    SweepConfig,
};
pub use synthetic::{generate_synthetic_hmm, SyntheticHmm, SyntheticSpec};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no ergodic graph after {attempts} attempts at edge density {density}")]
    NotErgodic { attempts: usize, density: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
