use std::collections::HashSet;

use crate::family::{MatchingFamily, RainbowAssignment};

use super::step::{AugmentStep, StepKind};

/// Repeatedly gives the lowest unchosen index with a free edge its first
/// free edge. The result admits no [`StepKind::Simple`] move.
pub fn greedy_extend(
    family: &MatchingFamily,
    assignment: &RainbowAssignment,
) -> (RainbowAssignment, Vec<AugmentStep>) {
    let mut a = assignment.clone();
    let mut lefts: HashSet<_> = a.covered_left().into_iter().collect();
    let mut rights: HashSet<_> = a.covered_right().into_iter().collect();
    let mut steps = Vec::new();
    loop {
        let pick = (0..family.n()).filter(|&i| !a.is_chosen(i)).find_map(|i| {
            family
                .matching(i)
                .edges()
                .iter()
                .find(|e| !lefts.contains(&e.left) && !rights.contains(&e.right))
                .map(|&e| (i, e))
        });
        let Some((i, e)) = pick else { break };
        a.insert(i, e);
        lefts.insert(e.left);
        rights.insert(e.right);
        steps.push(AugmentStep::new(StepKind::Simple, vec![], vec![(i, e)]));
    }
    (a, steps)
}
