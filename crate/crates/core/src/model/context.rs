use super::{StateGraph, DUMMY};

/// The `n` most recent states, oldest first.
///
/// Before `n` real states have been emitted the window is padded on the left
/// with [`DUMMY`]; dummies never appear after a real state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextWindow(Vec<usize>);

impl ContextWindow {
    /// All-dummy window of length `order`.
    pub fn initial(order: usize) -> Self {
        Self(vec![DUMMY; order])
    }

    /// Window of length `order` ending with the tail of `history`.
    pub fn from_history(order: usize, history: &[usize]) -> Self {
        let mut ctx = vec![DUMMY; order];
        let take = history.len().min(order);
        ctx[order - take..].copy_from_slice(&history[history.len() - take..]);
        Self(ctx)
    }

    pub fn push(&mut self, state: usize) {
        if self.0.is_empty() {
            return;
        }
        self.0.rotate_left(1);
        let last = self.0.len() - 1;
        self.0[last] = state;
    }

    /// Most recent state, or [`DUMMY`] when nothing has been emitted yet.
    pub fn last(&self) -> usize {
        self.0.last().copied().unwrap_or(DUMMY)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Checks the dummy-prefix invariant.
    pub fn is_well_formed(&self) -> bool {
        let real = self.0.iter().position(|&s| s != DUMMY).unwrap_or(self.0.len());
        self.0[real..].iter().all(|&s| s != DUMMY)
    }
}

/// Packs a context of `order` entries (states or [`DUMMY`]) into a single
/// index in base `num_states + 1`, dummy encoded as the top digit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ContextCodec {
    num_states: usize,
    order: usize,
    base: usize,
    size: usize,
}

impl ContextCodec {
    pub fn new(num_states: usize, order: usize) -> Self {
        let base = num_states + 1;
        let size = base
            .checked_pow(order as u32)
            .expect("context space overflows usize");
        Self {
            num_states,
            order,
            base,
            size,
        }
    }

    /// Number of distinct keys.
    pub fn size(&self) -> usize {
        self.size
    }

    fn digit(&self, state: usize) -> usize {
        if state == DUMMY {
            self.num_states
        } else {
            state
        }
    }

    pub fn encode(&self, ctx: &[usize]) -> usize {
        debug_assert_eq!(ctx.len(), self.order);
        ctx.iter().fold(0, |acc, &s| acc * self.base + self.digit(s))
    }

    pub fn decode_into(&self, mut key: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            let d = key % self.base;
            *slot = if d == self.num_states { DUMMY } else { d };
            key /= self.base;
        }
    }

    /// Drops the oldest entry and appends `state`.
    pub fn shift(&self, key: usize, state: usize) -> usize {
        if self.order == 0 {
            return 0;
        }
        (key * self.base + self.digit(state)) % self.size
    }

    pub fn last(&self, key: usize) -> usize {
        if self.order == 0 {
            return DUMMY;
        }
        let d = key % self.base;
        if d == self.num_states {
            DUMMY
        } else {
            d
        }
    }
}

/// Every context that can precede a reward at `time` on some valid path:
/// `max(order - time, 0)` leading dummies followed by a walk in `graph`.
pub fn contexts_at(graph: &StateGraph, order: usize, time: usize) -> Vec<Vec<usize>> {
    let dummies = order.saturating_sub(time);
    let mut out = vec![vec![DUMMY; dummies]];
    for _ in dummies..order {
        let mut next = Vec::new();
        for ctx in &out {
            let prev = ctx.last().copied().unwrap_or(DUMMY);
            for s in graph.next_states(prev) {
                let mut c = ctx.clone();
                c.push(s);
                next.push(c);
            }
        }
        out = next;
    }
    out
}
