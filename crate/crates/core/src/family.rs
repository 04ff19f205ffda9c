//! Edges, matchings, matching families and rainbow assignments.
//!
//! Vertices are plain non-negative integers. The left slot of an [`Edge`]
//! always names a vertex of side U and the right slot a vertex of side W, so
//! the two namespaces never mix. The vertex universe is implicit: a vertex
//! exists iff some family edge mentions it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Vertex identifier. Interpretation (U or W side) depends on the slot.
pub type Vertex = u32;

/// An edge between a U-vertex (`left`) and a W-vertex (`right`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub left: Vertex,
    pub right: Vertex,
}

impl Edge {
    pub const fn new(left: Vertex, right: Vertex) -> Self {
        Edge { left, right }
    }

    /// True when the two edges share a U-vertex or a W-vertex.
    pub fn meets(&self, other: &Edge) -> bool {
        self.left == other.left || self.right == other.right
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("matching {matching}: edges {first} and {second} share a vertex")]
    DuplicateVertexInMatching {
        matching: usize,
        first: Edge,
        second: Edge,
    },
    #[error("matching {matching}: edge {edge} listed twice")]
    DuplicateEdge { matching: usize, edge: Edge },
    #[error("matching {matching}: vertex id {value} is negative")]
    NegativeVertexId { matching: usize, value: i64 },
    #[error("matching {matching}: vertex id {value} does not fit in 32 bits")]
    VertexIdTooLarge { matching: usize, value: i64 },
    #[error("family index {index} out of range for a family of {n} matchings")]
    IndexOutOfRange { index: usize, n: usize },
}

/// A set of pairwise vertex-disjoint edges, kept in input order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    /// Builds a matching, rejecting shared endpoints and repeated edges.
    /// `index` is only used to label errors.
    pub fn new(index: usize, edges: Vec<Edge>) -> Result<Self, FamilyError> {
        let mut by_left: HashMap<Vertex, Edge> = HashMap::with_capacity(edges.len());
        let mut by_right: HashMap<Vertex, Edge> = HashMap::with_capacity(edges.len());
        for &edge in &edges {
            if let Some(&prev) = by_left.get(&edge.left).or_else(|| by_right.get(&edge.right)) {
                if prev == edge {
                    return Err(FamilyError::DuplicateEdge {
                        matching: index,
                        edge,
                    });
                }
                return Err(FamilyError::DuplicateVertexInMatching {
                    matching: index,
                    first: prev,
                    second: edge,
                });
            }
            by_left.insert(edge.left, edge);
            by_right.insert(edge.right, edge);
        }
        Ok(Matching { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.edges.contains(edge)
    }

    /// The edge covering U-vertex `u`, if any.
    pub fn edge_at_left(&self, u: Vertex) -> Option<Edge> {
        self.edges.iter().copied().find(|e| e.left == u)
    }

    /// The edge covering W-vertex `w`, if any.
    pub fn edge_at_right(&self, w: Vertex) -> Option<Edge> {
        self.edges.iter().copied().find(|e| e.right == w)
    }
}

/// An indexed list of matchings; index `i` plays the role of colour `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatchingFamily {
    matchings: Vec<Matching>,
}

impl MatchingFamily {
    pub fn new(matchings: Vec<Matching>) -> Self {
        MatchingFamily { matchings }
    }

    /// Builds a family from unsigned edge lists, validating each matching.
    pub fn from_edges<I, M>(raw: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = M>,
        M: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let matchings = raw
            .into_iter()
            .enumerate()
            .map(|(i, m)| Matching::new(i, m.into_iter().map(|(u, w)| Edge::new(u, w)).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatchingFamily { matchings })
    }

    pub fn n(&self) -> usize {
        self.matchings.len()
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn matching(&self, index: usize) -> &Matching {
        &self.matchings[index]
    }

    pub fn min_size(&self) -> usize {
        self.matchings.iter().map(Matching::len).min().unwrap_or(0)
    }

    /// Every U-vertex mentioned by some edge.
    pub fn left_vertices(&self) -> BTreeSet<Vertex> {
        self.all_edges().map(|e| e.left).collect()
    }

    /// Every W-vertex mentioned by some edge.
    pub fn right_vertices(&self) -> BTreeSet<Vertex> {
        self.all_edges().map(|e| e.right).collect()
    }

    /// All edges in canonical order (matching index, then position).
    pub fn all_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.matchings.iter().flat_map(|m| m.edges.iter().copied())
    }

    /// A copy of the family with `extra` appended as a new matching.
    pub fn with_matching(&self, extra: Matching) -> Self {
        let mut matchings = self.matchings.clone();
        matchings.push(extra);
        MatchingFamily { matchings }
    }

    /// Size of a maximum matching in the union graph of all family edges.
    pub fn union_matching_number(&self) -> usize {
        let edges: BTreeSet<Edge> = self.all_edges().collect();
        let lefts: Vec<Vertex> = edges.iter().map(|e| e.left).collect::<BTreeSet<_>>().into_iter().collect();
        let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
        for e in &edges {
            adj.entry(e.left).or_default().push(e.right);
        }
        let mut mate_of_right: HashMap<Vertex, Vertex> = HashMap::new();
        let mut size = 0;
        for &u in &lefts {
            let mut seen = HashSet::new();
            if kuhn_augment(u, &adj, &mut mate_of_right, &mut seen) {
                size += 1;
            }
        }
        size
    }
}

fn kuhn_augment(
    u: Vertex,
    adj: &HashMap<Vertex, Vec<Vertex>>,
    mate_of_right: &mut HashMap<Vertex, Vertex>,
    seen: &mut HashSet<Vertex>,
) -> bool {
    for &w in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
        if !seen.insert(w) {
            continue;
        }
        let free = match mate_of_right.get(&w) {
            None => true,
            Some(&other) => kuhn_augment(other, adj, mate_of_right, seen),
        };
        if free {
            mate_of_right.insert(w, u);
            return true;
        }
    }
    false
}

/// Validates raw signed edge lists into a family, preserving order.
pub fn validate_family(raw: &[Vec<(i64, i64)>]) -> Result<MatchingFamily, FamilyError> {
    let to_vertex = |matching: usize, value: i64| -> Result<Vertex, FamilyError> {
        if value < 0 {
            return Err(FamilyError::NegativeVertexId { matching, value });
        }
        Vertex::try_from(value).map_err(|_| FamilyError::VertexIdTooLarge { matching, value })
    };
    let mut matchings = Vec::with_capacity(raw.len());
    for (i, edges) in raw.iter().enumerate() {
        let edges = edges
            .iter()
            .map(|&(u, w)| Ok(Edge::new(to_vertex(i, u)?, to_vertex(i, w)?)))
            .collect::<Result<Vec<_>, FamilyError>>()?;
        matchings.push(Matching::new(i, edges)?);
    }
    Ok(MatchingFamily::new(matchings))
}

/// A partial choice function from family indices to edges.
///
/// Validity against a family is not enforced on construction; use
/// [`verify_rainbow`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RainbowAssignment {
    choices: BTreeMap<usize, Edge>,
}

impl RainbowAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<Edge> {
        self.choices.get(&index).copied()
    }

    pub fn is_chosen(&self, index: usize) -> bool {
        self.choices.contains_key(&index)
    }

    /// Sets the choice for `index`, returning the previous edge.
    pub fn insert(&mut self, index: usize, edge: Edge) -> Option<Edge> {
        self.choices.insert(index, edge)
    }

    pub fn remove(&mut self, index: usize) -> Option<Edge> {
        self.choices.remove(&index)
    }

    /// Choices in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Edge)> + '_ {
        self.choices.iter().map(|(&i, &e)| (i, e))
    }

    /// Family indices in `0..n` without a choice, ascending.
    pub fn unchosen(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.choices.contains_key(i)).collect()
    }

    pub fn covered_left(&self) -> BTreeSet<Vertex> {
        self.choices.values().map(|e| e.left).collect()
    }

    pub fn covered_right(&self) -> BTreeSet<Vertex> {
        self.choices.values().map(|e| e.right).collect()
    }

    /// Owner index of the chosen edge covering U-vertex `u`.
    pub fn owner_of_left(&self, u: Vertex) -> Option<(usize, Edge)> {
        self.iter().find(|(_, e)| e.left == u)
    }

    /// Owner index of the chosen edge covering W-vertex `w`.
    pub fn owner_of_right(&self, w: Vertex) -> Option<(usize, Edge)> {
        self.iter().find(|(_, e)| e.right == w)
    }

    /// True when `edge` shares no vertex with any chosen edge.
    pub fn is_disjoint_from(&self, edge: &Edge) -> bool {
        self.choices.values().all(|e| !e.meets(edge))
    }
}

impl FromIterator<(usize, Edge)> for RainbowAssignment {
    fn from_iter<T: IntoIterator<Item = (usize, Edge)>>(iter: T) -> Self {
        RainbowAssignment {
            choices: iter.into_iter().collect(),
        }
    }
}

/// Checks that every chosen edge belongs to its matching and that the chosen
/// edges are pairwise vertex-disjoint.
pub fn verify_rainbow(
    family: &MatchingFamily,
    assignment: &RainbowAssignment,
) -> Result<bool, FamilyError> {
    let n = family.n();
    let mut lefts = HashSet::new();
    let mut rights = HashSet::new();
    for (index, edge) in assignment.iter() {
        if index >= n {
            return Err(FamilyError::IndexOutOfRange { index, n });
        }
        if !family.matching(index).contains(&edge) {
            return Ok(false);
        }
        if !lefts.insert(edge.left) || !rights.insert(edge.right) {
            return Ok(false);
        }
    }
    Ok(true)
}
