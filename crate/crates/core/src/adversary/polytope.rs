use crate::model::StateGraph;

use super::AdversaryError;

/// Coordinates of a polytope vertex: a position on the base and one bit per
/// prism dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolytopeVertex {
    pub base: usize,
    pub bits: usize,
}

/// Inverse of the state numbering used by [`build_prismatic_polytope`].
pub fn polytope_vertex(state: usize, base_size: usize) -> PolytopeVertex {
    PolytopeVertex {
        base: state % base_size,
        bits: state / base_size,
    }
}

/// `Δ`-dimensional prism over a base of `base_size` vertices.
///
/// State `bits · m + b` is base vertex `b` in copy `bits ∈ {0,1}^{Δ-1}`.
/// Rungs join copies differing in one bit, in both directions. Each base copy
/// is an `m`-cycle, or a complete digraph when `strongly_connected_faces` is
/// set. Every vertex has a self-loop.
///
/// The diameter is `Δ` for a triangular base, and for any base of two or
/// more vertices with strongly connected faces. A cycle base with `m ≥ 4`
/// adds `⌊m/2⌋ - 1`.
pub fn build_prismatic_polytope(
    delta: usize,
    base_size: usize,
    strongly_connected_faces: bool,
) -> Result<StateGraph, AdversaryError> {
    if delta == 0 || base_size == 0 {
        return Err(AdversaryError::InvalidConfig(format!(
            "polytope needs Δ ≥ 1 and a non-empty base (got Δ={delta}, m={base_size})"
        )));
    }
    if delta > usize::BITS as usize {
        return Err(AdversaryError::InvalidConfig(format!("Δ={delta} is too large")));
    }
    let m = base_size;
    let copies = 1usize << (delta - 1);
    let mut successors = vec![Vec::new(); copies * m];
    for bits in 0..copies {
        for b in 0..m {
            let v = bits * m + b;
            let out = &mut successors[v];
            out.push(v);
            if strongly_connected_faces {
                out.extend((0..m).map(|c| bits * m + c));
            } else if m > 1 {
                out.push(bits * m + (b + 1) % m);
                out.push(bits * m + (b + m - 1) % m);
            }
            for j in 0..delta - 1 {
                out.push((bits ^ (1 << j)) * m + b);
            }
        }
    }
    Ok(StateGraph::new(successors)?)
}
