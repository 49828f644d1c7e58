use std::cell::{Cell, RefCell};

use crate::model::{RewardOracle, DUMMY};

/// Pays `M[t][s]` for state `s` only when every entry of the context is `s`
/// or the start-of-sequence dummy, i.e. after `n` consecutive visits.
fn visit_reward(value: f64, state: usize, context: &[usize]) -> f64 {
    if context.iter().all(|&c| c == DUMMY || c == state) {
        value
    } else {
        0.0
    }
}

/// A fixed reward matrix (indexed `[time][state]`) with consecutive-visit
/// semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsecutiveVisitOracle {
    columns: Vec<Vec<f64>>,
    num_states: usize,
    order: usize,
}

impl ConsecutiveVisitOracle {
    pub fn new(columns: Vec<Vec<f64>>, num_states: usize, order: usize) -> Self {
        assert!(columns.iter().all(|c| c.len() == num_states));
        Self {
            columns,
            num_states,
            order,
        }
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }
}

impl RewardOracle for ConsecutiveVisitOracle {
    fn num_states(&self) -> usize {
        self.num_states
    }
    fn order(&self) -> usize {
        self.order
    }
    fn horizon(&self) -> usize {
        self.columns.len()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        visit_reward(self.columns[time][state], state, context)
    }
}

/// A reward matrix filled in column by column while a decoder runs.
///
/// Looking up a column that has not been revealed yet answers NaN and is
/// counted; [`AdaptiveMatrix::premature_lookups`] should stay zero.
#[derive(Debug)]
pub struct AdaptiveMatrix {
    columns: RefCell<Vec<Option<Vec<f64>>>>,
    num_states: usize,
    order: usize,
    premature: Cell<u64>,
}

impl AdaptiveMatrix {
    pub fn new(horizon: usize, num_states: usize, order: usize) -> Self {
        Self {
            columns: RefCell::new(vec![None; horizon]),
            num_states,
            order,
            premature: Cell::new(0),
        }
    }

    /// Fixes column `time`. A column can only be revealed once.
    pub fn reveal(&self, time: usize, column: Vec<f64>) {
        assert_eq!(column.len(), self.num_states);
        let mut cols = self.columns.borrow_mut();
        assert!(cols[time].is_none(), "column {time} revealed twice");
        cols[time] = Some(column);
    }

    pub fn is_revealed(&self, time: usize) -> bool {
        self.columns.borrow()[time].is_some()
    }

    /// Number of columns revealed so far.
    pub fn revealed_columns(&self) -> usize {
        self.columns.borrow().iter().filter(|c| c.is_some()).count()
    }

    pub fn premature_lookups(&self) -> u64 {
        self.premature.get()
    }

    /// The completed matrix, or `None` while columns are missing.
    pub fn freeze(&self) -> Option<ConsecutiveVisitOracle> {
        let cols: Option<Vec<Vec<f64>>> = self.columns.borrow().iter().cloned().collect();
        cols.map(|c| ConsecutiveVisitOracle::new(c, self.num_states, self.order))
    }
}

impl RewardOracle for AdaptiveMatrix {
    fn num_states(&self) -> usize {
        self.num_states
    }
    fn order(&self) -> usize {
        self.order
    }
    fn horizon(&self) -> usize {
        self.columns.borrow().len()
    }
    fn reward(&self, time: usize, state: usize, context: &[usize]) -> f64 {
        match &self.columns.borrow()[time] {
            Some(col) => visit_reward(col[state], state, context),
            None => {
                self.premature.set(self.premature.get() + 1);
                f64::NAN
            }
        }
    }
}
