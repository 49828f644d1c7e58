//! Closed-form competitive-ratio bounds and the bound-minimizing discount.
//!
//! Every function takes the latency `L`, the model order `n` and the graph
//! diameter `Δ`, and works with the effective diameter `Δ̃ = Δ + n - 1`.
//! A bound whose formula is undefined or vacuous at the given input returns
//! [`BoundError::Inapplicable`], so callers can render it as "n/a".

use thiserror::Error;

use crate::model::EffectiveDiameter;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("{bound} does not apply at L={latency}, n={order}, Δ={diameter}")]
    Inapplicable {
        bound: &'static str,
        latency: usize,
        order: usize,
        diameter: usize,
    },
    #[error("invalid bound input: {0}")]
    InvalidInput(String),
}

fn effective(latency: usize, order: usize, diameter: usize) -> Result<f64, BoundError> {
    if order == 0 || diameter == 0 {
        return Err(BoundError::InvalidInput(format!(
            "order and diameter must be positive (n={order}, Δ={diameter}, L={latency})"
        )));
    }
    Ok(EffectiveDiameter::new(diameter, order).value() as f64)
}

fn inapplicable(bound: &'static str, latency: usize, order: usize, diameter: usize) -> BoundError {
    BoundError::Inapplicable {
        bound,
        latency,
        order,
        diameter,
    }
}

/// `γ = (Δ̃/(L+1))^{1/(L-Δ̃+1)}`, defined for `L ≥ Δ̃`.
pub fn optimal_gamma(latency: usize, order: usize, diameter: usize) -> Result<f64, BoundError> {
    let d = effective(latency, order, diameter)?;
    let l = latency as f64;
    if l < d {
        return Err(inapplicable("optimal_gamma", latency, order, diameter));
    }
    Ok((d / (l + 1.0)).powf(1.0 / (l - d + 1.0)))
}

/// Peek Search with the optimal discount:
/// `(L+1)/(L-Δ̃+1) · ((L+1)/Δ̃)^{Δ̃/(L-Δ̃+1)}`.
pub fn peek_search_upper_bound(latency: usize, order: usize, diameter: usize) -> Result<f64, BoundError> {
    let d = effective(latency, order, diameter)?;
    let l = latency as f64;
    if l < d {
        return Err(inapplicable("peek_search_upper_bound", latency, order, diameter));
    }
    let gap = l - d + 1.0;
    Ok((l + 1.0) / gap * ((l + 1.0) / d).powf(d / gap))
}

/// Randomized Peek Search, in expectation: `1 + Δ̃/(L+1-Δ̃)`.
pub fn randomized_upper_bound(latency: usize, order: usize, diameter: usize) -> Result<f64, BoundError> {
    let d = effective(latency, order, diameter)?;
    let gap = latency as f64 + 1.0 - d;
    if gap <= 0.0 {
        return Err(inapplicable("randomized_upper_bound", latency, order, diameter));
    }
    Ok(1.0 + d / gap)
}

/// Peek Reset: `1 + 2(Δ̃+1)Δ̃/(L-8Δ̃+1)`, only while the denominator is
/// positive.
pub fn peek_reset_upper_bound(latency: usize, order: usize, diameter: usize) -> Result<f64, BoundError> {
    let d = effective(latency, order, diameter)?;
    let denom = latency as f64 - 8.0 * d + 1.0;
    if denom <= 0.0 {
        return Err(inapplicable("peek_reset_upper_bound", latency, order, diameter));
    }
    Ok(1.0 + 2.0 * (d + 1.0) * d / denom)
}

fn require_latency(bound: &'static str, latency: usize, order: usize, diameter: usize) -> Result<(), BoundError> {
    if latency == 0 {
        return Err(inapplicable(bound, latency, order, diameter));
    }
    Ok(())
}

/// Floor for every deterministic online decoder:
/// `1 + (Δ̃/L)(1 + (Δ̃+L-1)/((Δ̃+L-1)² + Δ̃))`.
pub fn deterministic_lower_bound(latency: usize, order: usize, diameter: usize) -> Result<f64, BoundError> {
    let d = effective(latency, order, diameter)?;
    require_latency("deterministic_lower_bound", latency, order, diameter)?;
    let l = latency as f64;
    let s = d + l - 1.0;
    Ok(1.0 + d / l * (1.0 + s / (s * s + d)))
}

/// The same floor written with denominator `(L-Δ̃-1)² + 4Δ̃L - 3Δ̃`.
pub fn deterministic_lower_bound_expanded(
    latency: usize,
    order: usize,
    diameter: usize,
) -> Result<f64, BoundError> {
    let d = effective(latency, order, diameter)?;
    require_latency("deterministic_lower_bound", latency, order, diameter)?;
    let l = latency as f64;
    let m = l - d - 1.0;
    Ok(1.0 + d / l * (1.0 + (d + l - 1.0) / (m * m + 4.0 * d * l - 3.0 * d)))
}

fn check_epsilon(epsilon: f64) -> Result<(), BoundError> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(BoundError::InvalidInput(format!("epsilon {epsilon} outside (0, 1]")))
    }
}

/// Number of rows `u = 2^{Δ-1}⌈1/ε⌉` of the randomized construction.
pub fn randomized_rows(diameter: usize, epsilon: f64) -> Result<f64, BoundError> {
    check_epsilon(epsilon)?;
    if diameter == 0 {
        return Err(BoundError::InvalidInput("diameter must be positive".into()));
    }
    Ok(2f64.powi(diameter as i32 - 1) * (1.0 / epsilon).ceil())
}

/// Floor for every randomized online decoder.
///
/// At `Δ = 1` this is `1 + (1-ε)n/(L+εn)`; otherwise the row-count form
/// [`randomized_lower_bound_rows`].
pub fn randomized_lower_bound(
    latency: usize,
    order: usize,
    diameter: usize,
    epsilon: f64,
) -> Result<f64, BoundError> {
    effective(latency, order, diameter)?;
    check_epsilon(epsilon)?;
    require_latency("randomized_lower_bound", latency, order, diameter)?;
    if diameter > 1 {
        return randomized_lower_bound_rows(latency, order, diameter, epsilon);
    }
    let (l, n) = (latency as f64, order as f64);
    Ok(1.0 + (1.0 - epsilon) * n / (l + epsilon * n))
}

/// `1 + (u-1)n/(uL+n)` with `u = 2^{Δ-1}⌈1/ε⌉`, i.e. `(L+n)/(L+n/u)`.
pub fn randomized_lower_bound_rows(
    latency: usize,
    order: usize,
    diameter: usize,
    epsilon: f64,
) -> Result<f64, BoundError> {
    effective(latency, order, diameter)?;
    require_latency("randomized_lower_bound", latency, order, diameter)?;
    let u = randomized_rows(diameter, epsilon)?;
    let (l, n) = (latency as f64, order as f64);
    Ok(1.0 + (u - 1.0) * n / (u * l + n))
}
