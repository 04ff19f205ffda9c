//! Path augmentation for an assignment that is one short of full.
//!
//! Starting from a matching `F_1` of `F'`, the engine alternates between new
//! edges `e_i` (from an uncovered U-vertex into `W'`) and the chosen edges
//! `r_{i+1}` they collide with. Each `e_i` lives in the same matching as
//! `r_i`. The path closes in one of three ways:
//!
//! * an `e_{k+1}` lands on the W end of some `r_t` already on the path: the
//!   segment `r_t..r_{k+1}` is replaced by `e_t..e_{k+1}` plus one free
//!   matching edge leaving a released U-vertex into `Y`
//!   ([`StepKind::PathTriple`] when `k = 1, t = 1`, else
//!   [`StepKind::PathSegment`]);
//! * once the path holds `ceil(n/3)` new edges, an edge of `F_{k+1}` from a
//!   path U-vertex into `Y` and a disjoint free-matching edge from another
//!   path U-vertex replace the whole segment ([`StepKind::PathClosure`]);
//! * otherwise the path is extended by one more edge ([`StepKind::PathExtend`]).

use crate::family::{Edge, MatchingFamily, RainbowAssignment};
use crate::frontier::{compute_frontier, FrontierStructures};

use super::step::{AugmentStep, StepKind};
use super::SolveError;

/// Growing path: `new_edges[i]` and `segment[i]` belong to the same matching,
/// and `new_edges[i]` meets `segment[i + 1]` at its W end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathState {
    pub new_edges: Vec<Edge>,
    /// `(owner index, chosen edge)` for `r_1..r_{k+1}`.
    pub segment: Vec<(usize, Edge)>,
}

impl PathState {
    pub fn k(&self) -> usize {
        self.new_edges.len()
    }

    /// Position of the segment edge ending at W-vertex `w`.
    fn segment_position_at_right(&self, w: u32) -> Option<usize> {
        self.segment.iter().position(|(_, r)| r.right == w)
    }

    fn is_consistent(&self) -> bool {
        let k = self.k();
        self.segment.len() == k + 1
            && (0..k).all(|i| {
                self.new_edges[i].right == self.segment[i + 1].1.right && !self.new_edges[i].meets(&self.segment[i].1)
            })
            && (0..k).all(|i| (i + 1..k).all(|j| !self.new_edges[i].meets(&self.new_edges[j])))
    }
}

/// Outcome of one full path search for a fixed free index.
#[derive(Clone, Debug, Default)]
pub struct PathAttempt {
    pub step: Option<AugmentStep>,
    /// Total `PathExtend` moves across all seeds tried.
    pub extends: usize,
    /// Largest number of `PathExtend` moves in a single seeded walk.
    pub max_extends_per_walk: usize,
}

pub(crate) fn ceil_third(n: usize) -> usize {
    n.div_ceil(3)
}

/// Public entry point: builds the frontier for `free_index` and runs the
/// path search. Chosen indices other than `free_index` stay fixed; any other
/// unchosen index is ignored.
pub fn augment_by_path(
    family: &MatchingFamily,
    a: &RainbowAssignment,
    free_index: usize,
) -> Result<Option<AugmentStep>, SolveError> {
    if free_index >= family.n() || a.is_chosen(free_index) {
        return Err(SolveError::PreconditionViolated(format!(
            "free index {free_index} must be an unchosen index below {}",
            family.n()
        )));
    }
    let frontier = compute_frontier(family, a, free_index)
        .map_err(|e| SolveError::PreconditionViolated(e.to_string()))?;
    Ok(path_attempt(family, a, &frontier).step)
}

/// Tries every seed `(F_1, e_1)` in canonical order until one walk closes.
pub fn path_attempt(family: &MatchingFamily, a: &RainbowAssignment, frontier: &FrontierStructures) -> PathAttempt {
    let mut attempt = PathAttempt::default();
    if frontier.z.is_empty() {
        return attempt;
    }
    for &seed in &frontier.f_prime {
        let r1 = frontier.r_prime[&seed];
        for &e1 in family.matching(seed).edges() {
            if !frontier.x.contains(&e1.left) || !frontier.w_prime.contains(&e1.right) {
                continue;
            }
            let (r2_owner, r2) = frontier
                .r_prime_at_right(e1.right)
                .expect("every W' vertex is the end of an R' edge");
            let mut path = PathState {
                new_edges: vec![e1],
                segment: vec![(seed, r1), (r2_owner, r2)],
            };
            let (step, extends) = walk(family, a, frontier, &mut path);
            attempt.extends += extends;
            attempt.max_extends_per_walk = attempt.max_extends_per_walk.max(extends);
            if step.is_some() {
                attempt.step = step;
                return attempt;
            }
        }
    }
    attempt
}

fn walk(
    family: &MatchingFamily,
    a: &RainbowAssignment,
    frontier: &FrontierStructures,
    path: &mut PathState,
) -> (Option<AugmentStep>, usize) {
    let limit = ceil_third(family.n());
    let mut extends = 0;
    loop {
        debug_assert!(path.is_consistent());
        let k = path.k();
        let (owner, _) = path.segment[k];
        let candidates: Vec<Edge> = family
            .matching(owner)
            .edges()
            .iter()
            .copied()
            .filter(|e| {
                frontier.x.contains(&e.left)
                    && frontier.w_prime.contains(&e.right)
                    && path.new_edges.iter().all(|p| p.left != e.left)
            })
            .collect();

        if let Some((t, e)) = candidates
            .iter()
            .find_map(|e| path.segment_position_at_right(e.right).map(|t| (t, *e)))
        {
            return (Some(close_segment(family, a, frontier, path, t, e)), extends);
        }
        if k >= limit {
            return (close_through_y(family, frontier, path), extends);
        }
        let Some(e) = candidates.first().copied() else {
            return (None, extends);
        };
        let next = frontier
            .r_prime_at_right(e.right)
            .expect("every W' vertex is the end of an R' edge");
        path.new_edges.push(e);
        path.segment.push(next);
        extends += 1;
    }
}

/// Replace `r_t..r_{k+1}` by `e_t..e_{k+1}` and a free-matching edge.
fn close_segment(
    family: &MatchingFamily,
    a: &RainbowAssignment,
    frontier: &FrontierStructures,
    path: &PathState,
    t: usize,
    closing: Edge,
) -> AugmentStep {
    let k = path.k();
    let removed: Vec<(usize, Edge)> = path.segment[t..=k].to_vec();
    let mut added: Vec<(usize, Edge)> = (t..k).map(|i| (path.segment[i].0, path.new_edges[i])).collect();
    added.push((path.segment[k].0, closing));
    let f = path.segment[t..=k]
        .iter()
        .find_map(|(_, r)| frontier.free_edge_into_y(family, r.left))
        .expect("every R' edge starts at a Z vertex");
    added.push((frontier.free_index, f));
    debug_assert!(removed.iter().all(|&(i, r)| a.get(i) == Some(r)));
    let kind = if k == 1 && t == 0 {
        StepKind::PathTriple
    } else {
        StepKind::PathSegment
    };
    AugmentStep::new(kind, removed, added)
}

/// Replace the whole segment by `E`, an edge `e` of `F_{k+1}` from a segment
/// U-vertex into `Y`, and a free-matching edge `f` from a different segment
/// U-vertex into `Y \ {e's W end}`.
fn close_through_y(family: &MatchingFamily, frontier: &FrontierStructures, path: &PathState) -> Option<AugmentStep> {
    let k = path.k();
    let (owner, _) = path.segment[k];
    let on_segment = |u: u32| path.segment.iter().any(|(_, r)| r.left == u);
    for &e in family.matching(owner).edges() {
        if !frontier.y.contains(&e.right) || !on_segment(e.left) {
            continue;
        }
        let f = family
            .matching(frontier.free_index)
            .edges()
            .iter()
            .copied()
            .find(|f| frontier.y.contains(&f.right) && f.right != e.right && f.left != e.left && on_segment(f.left));
        if let Some(f) = f {
            let mut added: Vec<(usize, Edge)> = (0..k).map(|i| (path.segment[i].0, path.new_edges[i])).collect();
            added.push((owner, e));
            added.push((frontier.free_index, f));
            return Some(AugmentStep::new(StepKind::PathClosure, path.segment.clone(), added));
        }
    }
    None
}

/// Edge counts around one `F'` matching at a stuck state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClaimCounts {
    pub index: usize,
    pub x_to_y: usize,
    pub x_to_covered: usize,
    pub covered_to_y: usize,
    pub x_to_w_prime: usize,
}

/// Counts, for each matching of `F'`, its edges between the uncovered sides,
/// from `X` to covered W-vertices, from covered U-vertices to `Y`, and from
/// `X` to `W'`.
pub fn claim_counts(family: &MatchingFamily, frontier: &FrontierStructures) -> Vec<ClaimCounts> {
    frontier
        .f_prime
        .iter()
        .map(|&i| {
            let mut c = ClaimCounts {
                index: i,
                ..ClaimCounts::default()
            };
            for e in family.matching(i).edges() {
                let lx = frontier.x.contains(&e.left);
                let ry = frontier.y.contains(&e.right);
                match (lx, ry) {
                    (true, true) => c.x_to_y += 1,
                    (true, false) => c.x_to_covered += 1,
                    (false, true) => c.covered_to_y += 1,
                    (false, false) => {}
                }
                if lx && frontier.w_prime.contains(&e.right) {
                    c.x_to_w_prime += 1;
                }
            }
            c
        })
        .collect()
}

/// True when the counts meet the lower bounds that hold at a stuck state
/// with every matching of size at least `floor(5n/3)`: `|R'| >= floor(2n/3)
/// + 1`, at most one `X`-`Y` edge, at least `floor(2n/3)` edges on each
/// side, and at least `ceil(n/3)` edges into `W'`.
pub fn claim_bounds_hold(n: usize, frontier: &FrontierStructures, counts: &[ClaimCounts]) -> bool {
    let two_thirds = 2 * n / 3;
    let third = ceil_third(n);
    frontier.r_prime.len() > two_thirds
        && counts.iter().all(|c| {
            c.x_to_y <= 1 && c.x_to_covered >= two_thirds && c.covered_to_y >= two_thirds && c.x_to_w_prime >= third
        })
}
