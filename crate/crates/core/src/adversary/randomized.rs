use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::randomized_rows;
use crate::model::StateGraph;

use super::rewards::ConsecutiveVisitOracle;
use super::{build_prismatic_polytope, AdversaryError};

/// A hidden-row instance for randomized decoders.
#[derive(Debug, Clone)]
pub struct RandomizedInstance {
    pub graph: StateGraph,
    pub oracle: ConsecutiveVisitOracle,
    pub opt: f64,
    /// The row whose last entry pays `n`.
    pub secret: usize,
}

/// `u = 2^{Δ-1}⌈1/ε⌉` states on a polytope with strongly connected faces and
/// `L + 2` columns: zeros, then `L` columns of ones, then a column that pays
/// `n` on one row drawn from `seed` and 0 elsewhere. Staying on that row
/// from the start earns `OPT = L + n`.
pub fn randomized_adversary_instance(
    epsilon: f64,
    delta: usize,
    order: usize,
    latency: usize,
    seed: u64,
) -> Result<RandomizedInstance, AdversaryError> {
    let rows = randomized_rows(delta, epsilon)
        .map_err(|e| AdversaryError::InvalidConfig(e.to_string()))?;
    if order == 0 {
        return Err(AdversaryError::InvalidConfig("order must be positive".into()));
    }
    let base = (1.0 / epsilon).ceil() as usize;
    let graph = build_prismatic_polytope(delta, base, true)?;
    let u = graph.num_states();
    debug_assert_eq!(u as f64, rows);
    let secret = ChaCha8Rng::seed_from_u64(seed).random_range(0..u);

    let mut columns = Vec::with_capacity(latency + 2);
    columns.push(vec![0.0; u]);
    columns.extend(std::iter::repeat_n(vec![1.0; u], latency));
    let mut last = vec![0.0; u];
    last[secret] = order as f64;
    columns.push(last);

    Ok(RandomizedInstance {
        graph,
        oracle: ConsecutiveVisitOracle::new(columns, u, order),
        opt: (latency + order) as f64,
        secret,
    })
}
