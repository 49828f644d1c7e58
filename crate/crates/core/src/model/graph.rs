use std::collections::VecDeque;

use super::ModelError;

/// Directed transition structure over the state set `0..num_states`.
///
/// Successor lists are kept sorted and duplicate-free, which is the order
/// every decoder scans them in (lowest index wins ties). The first step of a
/// path is unconstrained: any state may follow the dummy start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    num_states: usize,
    successors: Vec<Vec<usize>>,
    adjacency: Vec<bool>,
    diameter: usize,
}

impl StateGraph {
    /// Builds a graph from per-state successor lists, normalizing each list
    /// and rejecting graphs that are not ergodic.
    pub fn new(successors: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let num_states = successors.len();
        if num_states == 0 {
            return Err(ModelError::EmptyGraph);
        }
        let mut adjacency = vec![false; num_states * num_states];
        let mut normalized = Vec::with_capacity(num_states);
        for (from, mut list) in successors.into_iter().enumerate() {
            if list.is_empty() {
                return Err(ModelError::NoSuccessors { state: from });
            }
            list.sort_unstable();
            list.dedup();
            for &to in &list {
                if to >= num_states {
                    return Err(ModelError::UnknownState {
                        state: to,
                        num_states,
                    });
                }
                adjacency[from * num_states + to] = true;
            }
            normalized.push(list);
        }
        let diameter = bfs_diameter(num_states, &normalized)?;
        Ok(Self {
            num_states,
            successors: normalized,
            adjacency,
            diameter,
        })
    }

    /// Complete graph with self-loops (diameter 1).
    pub fn fully_connected(num_states: usize) -> Self {
        assert!(num_states > 0, "graph needs at least one state");
        let all: Vec<usize> = (0..num_states).collect();
        Self::new(vec![all; num_states]).expect("complete graph is ergodic")
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.successors[state]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from < self.num_states && to < self.num_states && self.adjacency[from * self.num_states + to]
    }

    /// Whether `to` may follow `from`, where `from` may be the dummy state.
    pub fn allows(&self, from: usize, to: usize) -> bool {
        if from == super::DUMMY {
            to < self.num_states
        } else {
            self.has_edge(from, to)
        }
    }

    /// States that may follow `from` (every state after the dummy).
    pub fn next_states(&self, from: usize) -> NextStates<'_> {
        if from == super::DUMMY {
            NextStates::All(0..self.num_states)
        } else {
            NextStates::Listed(self.successors[from].iter())
        }
    }

    /// Cached diameter Δ.
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// The graph with every edge reversed.
    pub fn transpose(&self) -> Result<Self, ModelError> {
        let mut rev = vec![Vec::new(); self.num_states];
        for (from, list) in self.successors.iter().enumerate() {
            for &to in list {
                rev[to].push(from);
            }
        }
        Self::new(rev)
    }

    /// Shortest directed path lengths from `source` (`None` when unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        bfs(self.num_states, &self.successors, source)
    }
}

pub enum NextStates<'a> {
    All(std::ops::Range<usize>),
    Listed(std::slice::Iter<'a, usize>),
}

impl Iterator for NextStates<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            NextStates::All(r) => r.next(),
            NextStates::Listed(it) => it.next().copied(),
        }
    }
}

/// Recomputes Δ by breadth-first search from every state.
///
/// Δ is the largest shortest-path length over ordered pairs of distinct
/// states. A single-state graph has no such pair; its diameter is 1.
pub fn compute_diameter(graph: &StateGraph) -> Result<usize, ModelError> {
    bfs_diameter(graph.num_states, &graph.successors)
}

fn bfs(num_states: usize, successors: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; num_states];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &successors[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn bfs_diameter(num_states: usize, successors: &[Vec<usize>]) -> Result<usize, ModelError> {
    let mut diameter = 1;
    for source in 0..num_states {
        for (target, d) in bfs(num_states, successors, source).into_iter().enumerate() {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => {
                    return Err(ModelError::NotErgodic {
                        from: source,
                        to: target,
                    })
                }
            }
        }
    }
    Ok(diameter)
}
