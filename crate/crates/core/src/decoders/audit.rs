use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use crate::model::RewardOracle;

/// One reward lookup seen by the audit.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub position: usize,
    pub time: usize,
    pub state: usize,
    pub context: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AuditStats {
    pub queries: u64,
    pub violations: u64,
}

impl std::ops::AddAssign for AuditStats {
    fn add_assign(&mut self, rhs: Self) {
        self.queries += rhs.queries;
        self.violations += rhs.violations;
    }
}

/// Per-run view of an oracle that enforces the peek window.
///
/// While the decoder stands at `position`, any lookup of a time beyond
/// `position + latency` is counted as a violation and answered with NaN.
pub struct LatencyAudit<'a> {
    inner: &'a dyn RewardOracle,
    latency: usize,
    position: Cell<usize>,
    queries: Cell<u64>,
    violations: Cell<u64>,
    first_violation: Cell<Option<(usize, usize)>>,
    log: Option<RefCell<Vec<QueryRecord>>>,
}

impl<'a> LatencyAudit<'a> {
    pub fn new(inner: &'a dyn RewardOracle, latency: usize) -> Self {
        Self {
            inner,
            latency,
            position: Cell::new(0),
            queries: Cell::new(0),
            violations: Cell::new(0),
            first_violation: Cell::new(None),
            log: None,
        }
    }

    /// Also keep every answered value for [`check_commitment`].
    pub fn with_value_log(mut self) -> Self {
        self.log = Some(RefCell::new(Vec::new()));
        self
    }

    pub fn set_position(&self, position: usize) {
        self.position.set(position);
    }

    pub fn position(&self) -> usize {
        self.position.get()
    }

    pub fn latency(&self) -> usize {
        self.latency
    }

    /// Last time visible from the current position.
    pub fn visible_until(&self) -> usize {
        self.position.get().saturating_add(self.latency)
    }

    pub fn stats(&self) -> AuditStats {
        AuditStats {
            queries: self.queries.get(),
            violations: self.violations.get(),
        }
    }

    /// `(position, time)` of the first out-of-window lookup.
    pub fn first_violation(&self) -> Option<(usize, usize)> {
        self.first_violation.get()
    }

    pub fn take_log(&self) -> Option<Vec<QueryRecord>> {
        self.log.as_ref().map(|l| std::mem::take(&mut *l.borrow_mut()))
    }
}

impl RewardOracle for LatencyAudit<'_> {
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }
    fn order(&self) -> usize {
        self.inner.order()
    }
    fn horizon(&self) -> usize {
        self.inner.horizon()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        self.queries.set(self.queries.get() + 1);
        if time > self.visible_until() {
            self.violations.set(self.violations.get() + 1);
            if self.first_violation.get().is_none() {
                self.first_violation.set(Some((self.position.get(), time)));
            }
            return f64::NAN;
        }
        let value = self.inner.reward(time, state, context);
        if let Some(log) = &self.log {
            log.borrow_mut().push(QueryRecord {
                position: self.position.get(),
                time,
                state,
                context: context.to_vec(),
                value,
            });
        }
        value
    }
}

/// A reward that changed while it was visible.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitmentBreach {
    pub time: usize,
    pub state: usize,
    pub context: Vec<usize>,
    pub first: (usize, f64),
    pub later: (usize, f64),
}

/// Replays a value log and checks that every `(time, state, context)` was
/// answered identically from every position it was queried from.
pub fn check_commitment(log: &[QueryRecord]) -> Result<(), CommitmentBreach> {
    let mut seen: HashMap<(usize, usize, &[usize]), (usize, f64)> = HashMap::new();
    for q in log {
        let key = (q.time, q.state, q.context.as_slice());
        match seen.get(&key) {
            Some(&(pos, v)) if v.to_bits() != q.value.to_bits() => {
                return Err(CommitmentBreach {
                    time: q.time,
                    state: q.state,
                    context: q.context.clone(),
                    first: (pos, v),
                    later: (q.position, q.value),
                })
            }
            Some(_) => {}
            None => {
                seen.insert(key, (q.position, q.value));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RewardTable;

    #[test]
    fn out_of_window_lookup_is_flagged() {
        let table = RewardTable::from_fn(2, 1, 6, |t, _, _| t as f64);
        let audit = LatencyAudit::new(&table, 2);
        audit.set_position(1);
        assert_eq!(audit.reward(3, 0, &[0]), 3.0);
        assert!(audit.reward(4, 0, &[0]).is_nan());
        assert_eq!(audit.stats(), AuditStats { queries: 2, violations: 1 });
        assert_eq!(audit.first_violation(), Some((1, 4)));
    }

    struct Drifting(Cell<f64>);

    impl RewardOracle for Drifting {
        fn num_states(&self) -> usize {
            1
        }
        fn order(&self) -> usize {
            1
        }
        fn horizon(&self) -> usize {
            4
        }
        fn reward(&self, _: usize, _: usize, _: &[usize]) -> f64 {
            let v = self.0.get();
            self.0.set(v + 1.0);
            v
        }
    }

    #[test]
    fn commitment_check_catches_drift() {
        let table = RewardTable::from_fn(1, 1, 4, |t, _, _| t as f64);
        let audit = LatencyAudit::new(&table, 1).with_value_log();
        for pos in 0..3 {
            audit.set_position(pos);
            audit.reward(pos, 0, &[0]);
            audit.reward(pos + 1, 0, &[0]);
        }
        assert!(check_commitment(&audit.take_log().unwrap()).is_ok());

        let drifting = Drifting(Cell::new(0.0));
        let audit = LatencyAudit::new(&drifting, 1).with_value_log();
        audit.set_position(0);
        audit.reward(1, 0, &[0]);
        audit.set_position(1);
        audit.reward(1, 0, &[0]);
        let breach = check_commitment(&audit.take_log().unwrap()).unwrap_err();
        assert_eq!(breach.first, (0, 0.0));
        assert_eq!(breach.later, (1, 1.0));
    }
}
