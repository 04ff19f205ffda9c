use std::fmt;
use std::str::FromStr;

use crate::family::{Edge, RainbowAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    /// A free edge added to an unchosen matching.
    Simple,
    /// One chosen edge traded for two new ones through its endpoints.
    Swap2,
    /// Two path edges and one free-matching edge replace two chosen edges.
    PathTriple,
    /// A path segment `r_t..r_{k+1}` closed back onto itself.
    PathSegment,
    /// The whole path segment replaced, closed through the uncovered W side.
    PathClosure,
    /// Internal path growth; never changes the assignment.
    PathExtend,
    /// Small-instance fallback that replaces the assignment by an exact
    /// maximum witness.
    OracleFallback,
}

impl StepKind {
    pub const ALL: [StepKind; 7] = [
        StepKind::Simple,
        StepKind::Swap2,
        StepKind::PathTriple,
        StepKind::PathSegment,
        StepKind::PathClosure,
        StepKind::PathExtend,
        StepKind::OracleFallback,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StepKind::Simple => "Simple",
            StepKind::Swap2 => "Swap2",
            StepKind::PathTriple => "PathTriple",
            StepKind::PathSegment => "PathSegment",
            StepKind::PathClosure => "PathClosure",
            StepKind::PathExtend => "PathExtend",
            StepKind::OracleFallback => "OracleFallback",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StepKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown step kind `{s}`"))
    }
}

/// A change to the assignment: `removed` choices are dropped, then `added`
/// choices are inserted. Both lists are kept sorted by family index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AugmentStep {
    pub kind: StepKind,
    pub removed: Vec<(usize, Edge)>,
    pub added: Vec<(usize, Edge)>,
}

impl AugmentStep {
    pub fn new(kind: StepKind, mut removed: Vec<(usize, Edge)>, mut added: Vec<(usize, Edge)>) -> Self {
        removed.sort();
        added.sort();
        AugmentStep { kind, removed, added }
    }

    /// Net change in assignment size.
    pub fn gain(&self) -> isize {
        self.added.len() as isize - self.removed.len() as isize
    }

    /// Applies the step. Panics if a removed choice is not present, which
    /// would mean the step was built against a different assignment.
    pub fn apply(&self, assignment: &mut RainbowAssignment) {
        for &(i, e) in &self.removed {
            let prev = assignment.remove(i);
            assert_eq!(prev, Some(e), "step removes ({i},{e}) which is not chosen");
        }
        for &(i, e) in &self.added {
            let prev = assignment.insert(i, e);
            assert!(prev.is_none(), "step adds a second edge for index {i}");
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[(usize, Edge)]) -> fmt::Result {
    f.write_str("[")?;
    for (k, (i, e)) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "({i},{e})")?;
    }
    f.write_str("]")
}

/// Trace line: `<kind> - [(i,(u,w)),...] + [(i,(u,w)),...]`.
impl fmt::Display for AugmentStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - ", self.kind)?;
        write_list(f, &self.removed)?;
        f.write_str(" + ")?;
        write_list(f, &self.added)
    }
}

fn parse_list(s: &str) -> Result<Vec<(usize, Edge)>, String> {
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("expected [..], got `{s}`"))?;
    let digits: Vec<&str> = inner
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .collect();
    if !digits.len().is_multiple_of(3) {
        return Err(format!("malformed choice list `{s}`"));
    }
    digits
        .chunks(3)
        .map(|c| {
            let num = |t: &str| t.parse::<u64>().map_err(|e| e.to_string());
            Ok((num(c[0])? as usize, Edge::new(num(c[1])? as u32, num(c[2])? as u32)))
        })
        .collect()
}

impl FromStr for AugmentStep {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = line.split_once(" - ").ok_or("missing ` - `")?;
        let (removed, added) = rest.split_once(" + ").ok_or("missing ` + `")?;
        Ok(AugmentStep::new(kind.parse()?, parse_list(removed)?, parse_list(added)?))
    }
}
