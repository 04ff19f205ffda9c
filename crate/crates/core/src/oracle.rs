//! Exact maximum rainbow matching by exhaustive search.
//!
//! [`max_rainbow`] branches on family indices in ascending order. Each index
//! either takes one of its edges that is disjoint from the current image or
//! is skipped. A branch is cut only when `current + remaining indices` cannot
//! beat the incumbent, so the result is exact. Search also stops early once
//! the incumbent reaches `min(n, ν)`, where ν is the matching number of the
//! union graph.
//!
//! [`max_rainbow_second_opinion`] enumerates rainbow matchings edge by edge
//! instead and exists to cross-check the first.

use std::collections::HashMap;

use thiserror::Error;

use crate::family::{Edge, MatchingFamily, RainbowAssignment, Vertex};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Instances whose enumeration space exceeds this are refused by the
/// second-opinion oracle.
pub const SECOND_OPINION_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub max_size: usize,
    pub witness: RainbowAssignment,
    pub nodes_explored: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("node budget of {budget} exceeded; best found so far is a lower bound of {}", best.max_size)]
    BudgetExceeded { budget: u64, best: OracleResult },
    #[error("instance too large for exhaustive enumeration ({space} > {limit})")]
    InstanceTooLarge { space: u128, limit: u128 },
}

/// Edges of every matching with both endpoints remapped to dense slots.
struct DenseFamily {
    matchings: Vec<Vec<(usize, usize, Edge)>>,
    left_count: usize,
    right_count: usize,
}

impl DenseFamily {
    fn new(family: &MatchingFamily) -> Self {
        let mut left_ids: HashMap<Vertex, usize> = HashMap::new();
        let mut right_ids: HashMap<Vertex, usize> = HashMap::new();
        let matchings = family
            .matchings()
            .iter()
            .map(|m| {
                m.edges()
                    .iter()
                    .map(|&e| {
                        let next_l = left_ids.len();
                        let l = *left_ids.entry(e.left).or_insert(next_l);
                        let next_r = right_ids.len();
                        let r = *right_ids.entry(e.right).or_insert(next_r);
                        (l, r, e)
                    })
                    .collect()
            })
            .collect();
        DenseFamily {
            matchings,
            left_count: left_ids.len(),
            right_count: right_ids.len(),
        }
    }
}

struct Search<'a> {
    dense: &'a DenseFamily,
    used_left: Vec<bool>,
    used_right: Vec<bool>,
    current: Vec<(usize, Edge)>,
    best: Vec<(usize, Edge)>,
    target: usize,
    nodes: u64,
    budget: u64,
}

enum Flow {
    Continue,
    Done,
    OutOfBudget,
}

impl Search<'_> {
    fn visit(&mut self, index: usize) -> Flow {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Flow::OutOfBudget;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
            if self.best.len() >= self.target {
                return Flow::Done;
            }
        }
        let n = self.dense.matchings.len();
        if index == n || self.current.len() + (n - index) <= self.best.len() {
            return Flow::Continue;
        }
        for k in 0..self.dense.matchings[index].len() {
            let (l, r, e) = self.dense.matchings[index][k];
            if self.used_left[l] || self.used_right[r] {
                continue;
            }
            self.used_left[l] = true;
            self.used_right[r] = true;
            self.current.push((index, e));
            let flow = self.visit(index + 1);
            self.current.pop();
            self.used_left[l] = false;
            self.used_right[r] = false;
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        self.visit(index + 1)
    }
}

/// Exact maximum partial rainbow matching. `budget` caps the number of
/// search nodes (default [`DEFAULT_NODE_BUDGET`]).
pub fn max_rainbow(family: &MatchingFamily, budget: Option<u64>) -> Result<OracleResult, OracleError> {
    let dense = DenseFamily::new(family);
    let budget = budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let mut search = Search {
        dense: &dense,
        used_left: vec![false; dense.left_count],
        used_right: vec![false; dense.right_count],
        current: Vec::new(),
        best: Vec::new(),
        target: family.n().min(family.union_matching_number()),
        nodes: 0,
        budget,
    };
    let flow = search.visit(0);
    let result = OracleResult {
        max_size: search.best.len(),
        witness: search.best.iter().copied().collect(),
        nodes_explored: search.nodes,
    };
    match flow {
        Flow::OutOfBudget => Err(OracleError::BudgetExceeded { budget, best: result }),
        Flow::Continue | Flow::Done => Ok(result),
    }
}

/// Independent exact oracle: walks the list of all `(index, edge)` items
/// sorted by edge and decides include/exclude for each, with no bound-based
/// pruning.
pub fn max_rainbow_second_opinion(family: &MatchingFamily) -> Result<OracleResult, OracleError> {
    let space = family
        .matchings()
        .iter()
        .try_fold(1u128, |acc, m| acc.checked_mul(m.len() as u128 + 1))
        .unwrap_or(u128::MAX);
    if space > SECOND_OPINION_LIMIT {
        return Err(OracleError::InstanceTooLarge {
            space,
            limit: SECOND_OPINION_LIMIT,
        });
    }
    let mut items: Vec<(Edge, usize)> = family
        .matchings()
        .iter()
        .enumerate()
        .flat_map(|(i, m)| m.edges().iter().map(move |&e| (e, i)))
        .collect();
    items.sort();

    struct Walk<'a> {
        items: &'a [(Edge, usize)],
        chosen: Vec<(Edge, usize)>,
        best: Vec<(Edge, usize)>,
        nodes: u64,
    }
    impl Walk<'_> {
        fn go(&mut self, pos: usize) {
            self.nodes += 1;
            if pos == self.items.len() {
                if self.chosen.len() > self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            }
            let (e, i) = self.items[pos];
            let fits = self.chosen.iter().all(|&(c, ci)| ci != i && !c.meets(&e));
            if fits {
                self.chosen.push((e, i));
                self.go(pos + 1);
                self.chosen.pop();
            }
            self.go(pos + 1);
        }
    }

    let mut walk = Walk {
        items: &items,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    walk.go(0);
    Ok(OracleResult {
        max_size: walk.best.len(),
        witness: walk.best.iter().map(|&(e, i)| (i, e)).collect(),
        nodes_explored: walk.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{validate_family, verify_rainbow};
    use crate::generators::drisko_tight;

    #[test]
    fn single_edge() {
        let f = validate_family(&[vec![(0, 0)]]).unwrap();
        assert_eq!(max_rainbow(&f, None).unwrap().max_size, 1);
        assert_eq!(max_rainbow_second_opinion(&f).unwrap().max_size, 1);
    }

    #[test]
    fn k22_pair_has_max_one() {
        let f = validate_family(&[vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]).unwrap();
        let r = max_rainbow(&f, None).unwrap();
        assert_eq!(r.max_size, 1);
        assert!(verify_rainbow(&f, &r.witness).unwrap());
        // First witness in branch order: index 0 takes its first edge.
        assert_eq!(r.witness.get(0), Some(Edge::new(0, 0)));
        assert_eq!(max_rainbow_second_opinion(&f).unwrap().max_size, 1);
    }

    #[test]
    fn drisko_three() {
        let f = drisko_tight(3).unwrap();
        assert_eq!(max_rainbow(&f, None).unwrap().max_size, 2);
        assert_eq!(max_rainbow_second_opinion(&f).unwrap().max_size, 2);
    }

    #[test]
    fn budget_overrun_reports_lower_bound() {
        let f = drisko_tight(5).unwrap();
        match max_rainbow(&f, Some(10)) {
            Err(OracleError::BudgetExceeded { budget: 10, best }) => {
                assert!(best.max_size <= 4);
                assert!(verify_rainbow(&f, &best.witness).unwrap());
            }
            other => panic!("expected budget overrun, got {other:?}"),
        }
    }

    #[test]
    fn second_opinion_refuses_large_instances() {
        let f = drisko_tight(12).unwrap();
        assert!(matches!(
            max_rainbow_second_opinion(&f),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn empty_family() {
        let f = MatchingFamily::new(Vec::new());
        let r = max_rainbow(&f, None).unwrap();
        assert_eq!(r.max_size, 0);
        assert!(r.witness.is_empty());
    }
}
