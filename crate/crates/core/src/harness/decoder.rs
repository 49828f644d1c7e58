use std::fmt;
use std::str::FromStr;

use crate::bounds;
use crate::decoders::{
    DecodeError, DecodeTrace, Greedy, OnlineDecoder, PeekConfig, PeekReset, PeekSearch,
    RandomizedPeekSearch, Viterbi,
};
use crate::decoders::{
    greedy_decode, peek_reset_decode, peek_search_decode, randomized_peek_search_decode,
    viterbi_decode,
};
use crate::model::{RewardOracle, StateGraph};

use super::HarnessError;

/// The decoders the harness knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecoderKind {
    Greedy,
    PeekReset,
    PeekSearch,
    RandomizedPeekSearch,
    Viterbi,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 5] = [
        DecoderKind::Greedy,
        DecoderKind::PeekReset,
        DecoderKind::PeekSearch,
        DecoderKind::RandomizedPeekSearch,
        DecoderKind::Viterbi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Greedy => "greedy",
            DecoderKind::PeekReset => "peek_reset",
            DecoderKind::PeekSearch => "peek_search",
            DecoderKind::RandomizedPeekSearch => "randomized_peek_search",
            DecoderKind::Viterbi => "viterbi",
        }
    }

    /// Whether the output depends on the seed.
    pub fn is_randomized(self) -> bool {
        self == DecoderKind::RandomizedPeekSearch
    }

    /// Discount actually used by the decoder; `None` for greedy.
    pub fn gamma(self, config: &PeekConfig, order: usize, diameter: usize) -> Result<Option<f64>, DecodeError> {
        Ok(match self {
            DecoderKind::PeekSearch => Some(config.resolve_gamma(order, diameter)?.value),
            DecoderKind::Greedy => None,
            _ => Some(1.0),
        })
    }

    /// The proven competitive ratio for this decoder, when one applies.
    pub fn bound(self, config: &PeekConfig, order: usize, diameter: usize) -> Option<f64> {
        let l = config.latency;
        match self {
            DecoderKind::PeekSearch => {
                let g = config.resolve_gamma(order, diameter).ok()?;
                if g.optimal {
                    bounds::peek_search_upper_bound(l, order, diameter).ok()
                } else {
                    None
                }
            }
            DecoderKind::RandomizedPeekSearch => bounds::randomized_upper_bound(l, order, diameter).ok(),
            DecoderKind::PeekReset => bounds::peek_reset_upper_bound(l, order, diameter).ok(),
            DecoderKind::Greedy => None,
            DecoderKind::Viterbi => Some(1.0),
        }
    }

    /// A streaming decoder instance for an instance of length `horizon`.
    pub fn build(
        self,
        config: &PeekConfig,
        order: usize,
        diameter: usize,
        horizon: usize,
        seed: u64,
    ) -> Result<Box<dyn OnlineDecoder>, DecodeError> {
        Ok(match self {
            DecoderKind::Greedy => Box::new(Greedy),
            DecoderKind::PeekReset => Box::new(PeekReset::new(config.latency)?),
            DecoderKind::PeekSearch => Box::new(PeekSearch::new(
                config.latency,
                config.resolve_gamma(order, diameter)?.value,
            )),
            DecoderKind::RandomizedPeekSearch => {
                Box::new(RandomizedPeekSearch::from_seed(config.latency, seed)?)
            }
            DecoderKind::Viterbi => Box::new(Viterbi::new(horizon)),
        })
    }

    /// Decodes a whole instance. Padding applies to Peek Search only.
    pub fn decode<O: RewardOracle + ?Sized>(
        self,
        oracle: &O,
        graph: &StateGraph,
        config: &PeekConfig,
        seed: u64,
    ) -> Result<DecodeTrace, DecodeError> {
        match self {
            DecoderKind::Greedy => greedy_decode(oracle, graph),
            DecoderKind::PeekReset => peek_reset_decode(oracle, graph, config.latency),
            DecoderKind::PeekSearch => peek_search_decode(oracle, graph, config),
            DecoderKind::RandomizedPeekSearch => {
                randomized_peek_search_decode(oracle, graph, config.latency, seed)
            }
            DecoderKind::Viterbi => viterbi_decode(oracle, graph),
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let kind = match key.as_str() {
            "greedy" => DecoderKind::Greedy,
            "peek_reset" | "reset" => DecoderKind::PeekReset,
            "peek_search" | "peek" => DecoderKind::PeekSearch,
            "randomized_peek_search" | "randomized" => DecoderKind::RandomizedPeekSearch,
            "viterbi" => DecoderKind::Viterbi,
            _ => return Err(HarnessError::InvalidInput(format!("unknown decoder `{s}`"))),
        };
        Ok(kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse_back() {
        for kind in DecoderKind::ALL {
            assert_eq!(kind.name().parse::<DecoderKind>().unwrap(), kind);
        }
        assert!("beam".parse::<DecoderKind>().is_err());
    }

    #[test]
    fn name_order_matches_enum_order() {
        let mut names: Vec<_> = DecoderKind::ALL.iter().map(|k| k.name()).collect();
        names.sort();
        let ordered: Vec<_> = DecoderKind::ALL.iter().map(|k| k.name()).collect();
        assert_eq!(names, ordered);
    }
}
