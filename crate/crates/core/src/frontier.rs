//! Frontier structures around a partial rainbow assignment.
//!
//! Given an assignment and one unchosen ("free") matching, the frontier
//! records the uncovered vertices on each side, the covered U-vertices the
//! free matching sends into the uncovered W side, and the assignment edges
//! sitting on those vertices. Path augmentation works entirely inside this
//! staging area.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::family::{Edge, MatchingFamily, RainbowAssignment, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontierError {
    #[error("free index {0} already has a chosen edge")]
    FreeIndexAlreadyChosen(usize),
    #[error("free index {index} out of range for a family of {n} matchings")]
    IndexOutOfRange { index: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierStructures {
    pub free_index: usize,
    /// Uncovered U-vertices.
    pub x: BTreeSet<Vertex>,
    /// Uncovered W-vertices.
    pub y: BTreeSet<Vertex>,
    /// Covered U-vertices that the free matching joins to `y`.
    pub z: BTreeSet<Vertex>,
    /// Assignment choices whose edge covers a vertex of `z`.
    pub r_prime: BTreeMap<usize, Edge>,
    /// Right endpoints of the `r_prime` edges.
    pub w_prime: BTreeSet<Vertex>,
    /// Indices owning an `r_prime` edge.
    pub f_prime: BTreeSet<usize>,
}

impl FrontierStructures {
    /// The `r_prime` entry whose edge ends at W-vertex `w`.
    pub fn r_prime_at_right(&self, w: Vertex) -> Option<(usize, Edge)> {
        self.r_prime
            .iter()
            .find(|(_, e)| e.right == w)
            .map(|(&i, &e)| (i, e))
    }

    /// The free-matching edge from `u` into `y`, if any.
    pub fn free_edge_into_y(&self, family: &MatchingFamily, u: Vertex) -> Option<Edge> {
        family
            .matching(self.free_index)
            .edge_at_left(u)
            .filter(|f| self.y.contains(&f.right))
    }
}

pub fn compute_frontier(
    family: &MatchingFamily,
    assignment: &RainbowAssignment,
    free_index: usize,
) -> Result<FrontierStructures, FrontierError> {
    let n = family.n();
    if free_index >= n {
        return Err(FrontierError::IndexOutOfRange {
            index: free_index,
            n,
        });
    }
    if assignment.is_chosen(free_index) {
        return Err(FrontierError::FreeIndexAlreadyChosen(free_index));
    }
    let covered_left = assignment.covered_left();
    let covered_right = assignment.covered_right();
    let x: BTreeSet<Vertex> = family
        .left_vertices()
        .into_iter()
        .filter(|u| !covered_left.contains(u))
        .collect();
    let y: BTreeSet<Vertex> = family
        .right_vertices()
        .into_iter()
        .filter(|w| !covered_right.contains(w))
        .collect();
    let z: BTreeSet<Vertex> = family
        .matching(free_index)
        .edges()
        .iter()
        .filter(|e| y.contains(&e.right) && covered_left.contains(&e.left))
        .map(|e| e.left)
        .collect();
    let r_prime: BTreeMap<usize, Edge> = assignment.iter().filter(|(_, e)| z.contains(&e.left)).collect();
    let w_prime = r_prime.values().map(|e| e.right).collect();
    let f_prime = r_prime.keys().copied().collect();
    Ok(FrontierStructures {
        free_index,
        x,
        y,
        z,
        r_prime,
        w_prime,
        f_prime,
    })
}
