//! Constructive full rainbow matching solver.
//!
//! [`solve_full`] grows an assignment with moves of increasing reach:
//! greedy additions, two-for-one swaps, in-place re-choices around the free
//! matching, and finally path augmentation. Every applied move gains exactly
//! one edge. When the solver cannot move and every matching has at least
//! `floor(5n/3)` edges, the instance is reported as a counterexample
//! candidate rather than silently given up on.

mod greedy;
mod path;
mod step;
mod swap;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::family::{verify_rainbow, MatchingFamily, RainbowAssignment};
use crate::frontier::compute_frontier;
use crate::oracle::max_rainbow;

pub use greedy::greedy_extend;
pub use path::{augment_by_path, claim_bounds_hold, claim_counts, path_attempt, ClaimCounts, PathAttempt, PathState};
pub use step::{AugmentStep, StepKind};
pub use swap::{augment_claim_swap, augment_swap2};

/// Environment variable enabling per-step verification.
pub const DEBUG_ASSERT_ENV: &str = "RAINBOW_DEBUG_ASSERT";

/// Largest `n` for which a stuck solve falls back to the exact oracle.
pub const ORACLE_FALLBACK_MAX_N: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// `floor(5n/3)`: the matching size from which a full rainbow matching is
/// guaranteed.
pub fn full_rainbow_threshold(n: usize) -> usize {
    5 * n / 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub swap2: bool,
    /// Re-choice swaps and path augmentation around a free matching.
    pub path: bool,
    pub oracle_fallback: bool,
    /// Verify the assignment and the +1 gain after every step; panics on
    /// violation.
    pub check_steps: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            swap2: true,
            path: true,
            oracle_fallback: true,
            check_steps: false,
        }
    }
}

impl SolverConfig {
    /// Defaults, with `check_steps` taken from `RAINBOW_DEBUG_ASSERT=1`.
    pub fn from_env() -> Self {
        SolverConfig {
            check_steps: std::env::var(DEBUG_ASSERT_ENV).is_ok_and(|v| v == "1"),
            ..SolverConfig::default()
        }
    }

    pub fn greedy_only() -> Self {
        SolverConfig {
            swap2: false,
            path: false,
            oracle_fallback: false,
            check_steps: false,
        }
    }

    pub fn simple_and_swap2() -> Self {
        SolverConfig {
            swap2: true,
            ..Self::greedy_only()
        }
    }

    pub fn checked(self) -> Self {
        SolverConfig {
            check_steps: true,
            ..self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Complete,
    Incomplete,
    CounterexampleCandidate,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Complete => "Complete",
            SolveStatus::Incomplete => "Incomplete",
            SolveStatus::CounterexampleCandidate => "CounterexampleCandidate",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveCounters {
    pub steps: BTreeMap<StepKind, usize>,
    /// Path searches started (one per free index tried at a stuck state).
    pub path_attempts: usize,
    /// Largest number of extensions in one seeded path walk.
    pub max_extends_per_walk: usize,
    /// Stuck states at `|a| = n - 1` whose edge counts were measured.
    pub claim_states_checked: usize,
    /// Measured states where the size hypothesis held but a count bound did
    /// not.
    pub claim_violations: usize,
    pub elapsed: Duration,
}

impl SolveCounters {
    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.get(&kind).copied().unwrap_or(0)
    }

    fn bump(&mut self, kind: StepKind, by: usize) {
        if by > 0 {
            *self.steps.entry(kind).or_default() += by;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub n: usize,
    pub assignment: RainbowAssignment,
    /// Applied steps in order; `PathExtend` moves are only counted.
    pub trace: Vec<AugmentStep>,
    pub counters: SolveCounters,
}

impl SolveReport {
    pub fn size(&self) -> usize {
        self.assignment.len()
    }

    /// One trace line per step, newline-terminated.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|s| format!("{s}\n")).collect()
    }
}

struct Run<'a> {
    family: &'a MatchingFamily,
    config: SolverConfig,
    a: RainbowAssignment,
    trace: Vec<AugmentStep>,
    counters: SolveCounters,
    hypothesis: bool,
}

impl Run<'_> {
    fn apply(&mut self, step: AugmentStep) {
        let before = self.a.len();
        step.apply(&mut self.a);
        if self.config.check_steps {
            assert!(
                verify_rainbow(self.family, &self.a).unwrap_or(false),
                "step `{step}` produced an invalid assignment"
            );
            if step.kind != StepKind::OracleFallback {
                assert_eq!(self.a.len(), before + 1, "step `{step}` does not gain exactly one edge");
            }
        }
        self.counters.bump(step.kind, 1);
        self.trace.push(step);
    }

    /// One move beyond greedy, or `None` when stuck.
    fn next_move(&mut self) -> Option<AugmentStep> {
        if self.config.swap2 {
            if let Some(step) = augment_swap2(self.family, &self.a) {
                return Some(step);
            }
        }
        if !self.config.path {
            return None;
        }
        let n = self.family.n();
        for free in self.a.unchosen(n) {
            let frontier = compute_frontier(self.family, &self.a, free).expect("free index is unchosen");
            if let Some(step) = augment_claim_swap(self.family, &self.a, &frontier) {
                return Some(step);
            }
            if self.a.len() + 1 == n {
                let counts = claim_counts(self.family, &frontier);
                self.counters.claim_states_checked += 1;
                if self.hypothesis && !claim_bounds_hold(n, &frontier, &counts) {
                    self.counters.claim_violations += 1;
                }
            }
            self.counters.path_attempts += 1;
            let attempt = path_attempt(self.family, &self.a, &frontier);
            self.counters.bump(StepKind::PathExtend, attempt.extends);
            self.counters.max_extends_per_walk = self.counters.max_extends_per_walk.max(attempt.max_extends_per_walk);
            if attempt.step.is_some() {
                return attempt.step;
            }
        }
        None
    }
}

/// Solves with [`SolverConfig::from_env`].
pub fn solve_full(family: &MatchingFamily) -> SolveReport {
    solve_with(family, SolverConfig::from_env())
}

pub fn solve_with(family: &MatchingFamily, config: SolverConfig) -> SolveReport {
    let start = Instant::now();
    let n = family.n();
    let hypothesis = n > 0 && family.min_size() >= full_rainbow_threshold(n);
    let mut run = Run {
        family,
        config,
        a: RainbowAssignment::new(),
        trace: Vec::new(),
        counters: SolveCounters::default(),
        hypothesis,
    };
    while run.a.len() < n {
        let (_, steps) = greedy_extend(family, &run.a);
        if !steps.is_empty() {
            for step in steps {
                run.apply(step);
            }
            continue;
        }
        match run.next_move() {
            Some(step) => run.apply(step),
            None => break,
        }
    }
    if run.a.len() < n && config.oracle_fallback && n <= ORACLE_FALLBACK_MAX_N {
        let best = max_rainbow(family, None).expect("tiny instances fit the default budget");
        if best.max_size > run.a.len() {
            let step = AugmentStep::new(
                StepKind::OracleFallback,
                run.a.iter().collect(),
                best.witness.iter().collect(),
            );
            run.apply(step);
        }
    }
    let status = if run.a.len() == n {
        SolveStatus::Complete
    } else if hypothesis {
        SolveStatus::CounterexampleCandidate
    } else {
        SolveStatus::Incomplete
    };
    run.counters.elapsed = start.elapsed();
    SolveReport {
        status,
        n,
        assignment: run.a,
        trace: run.trace,
        counters: run.counters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::validate_family;
    use crate::generators::{drisko_matching_a, drisko_tight, random_family, GenSpec};
    use crate::oracle::max_rainbow;

    #[test]
    fn thresholds() {
        assert_eq!(full_rainbow_threshold(2), 3);
        assert_eq!(full_rainbow_threshold(3), 5);
        assert_eq!(full_rainbow_threshold(5), 8);
        assert_eq!(path::ceil_third(4), 2);
    }

    #[test]
    fn single_edge_complete() {
        let f = validate_family(&[vec![(0, 0)]]).unwrap();
        let r = solve_with(&f, SolverConfig::default().checked());
        assert_eq!(r.status, SolveStatus::Complete);
        assert_eq!(r.size(), 1);
        assert_eq!(r.trace_text(), "Simple - [] + [(0,(0,0))]\n");
    }

    #[test]
    fn k22_incomplete() {
        let f = validate_family(&[vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]).unwrap();
        let r = solve_with(&f, SolverConfig::default().checked());
        assert_eq!(r.status, SolveStatus::Incomplete);
        assert_eq!(r.size(), 1);
    }

    #[test]
    fn drisko_plus_a_reaches_three() {
        let f = drisko_tight(3).unwrap().with_matching(drisko_matching_a(3));
        let r = solve_with(&f, SolverConfig::default().checked());
        assert_eq!(r.status, SolveStatus::Incomplete);
        assert_eq!(r.size(), 3);
    }

    #[test]
    fn n3_size5_complete() {
        for seed in 0..200 {
            let spec = GenSpec {
                n: 3,
                size: 5,
                u_max: 6,
                w_max: 6,
                seed,
            };
            let f = random_family(&spec).unwrap();
            let r = solve_with(&f, SolverConfig::default().checked());
            assert_eq!(r.status, SolveStatus::Complete, "seed {seed}");
            assert_eq!(max_rainbow(&f, None).unwrap().max_size, 3);
        }
    }

    #[test]
    fn n5_size8_complete() {
        for seed in 0..200 {
            let spec = GenSpec {
                n: 5,
                size: 8,
                u_max: 12,
                w_max: 12,
                seed,
            };
            let r = solve_with(&random_family(&spec).unwrap(), SolverConfig::default().checked());
            assert_eq!(r.status, SolveStatus::Complete, "seed {seed}");
        }
    }

    #[test]
    fn empty_family_is_complete() {
        let r = solve_full(&MatchingFamily::new(Vec::new()));
        assert_eq!(r.status, SolveStatus::Complete);
    }

    #[test]
    fn greedy_only_config_never_swaps() {
        let f = validate_family(&[vec![(0, 0)], vec![(1, 0)], vec![(0, 1)]]).unwrap();
        let r = solve_with(&f, SolverConfig::greedy_only());
        assert_eq!(r.size(), 1);
        let r = solve_with(&f, SolverConfig::simple_and_swap2().checked());
        assert_eq!(r.size(), 2);
        assert_eq!(r.counters.count(StepKind::Swap2), 1);
    }
}
