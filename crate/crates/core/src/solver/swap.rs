use std::collections::BTreeSet;

use crate::family::{MatchingFamily, RainbowAssignment, Vertex};
use crate::frontier::FrontierStructures;

use super::step::{AugmentStep, StepKind};

fn uncovered(family: &MatchingFamily, a: &RainbowAssignment) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
    let cl = a.covered_left();
    let cr = a.covered_right();
    let x = family.left_vertices().into_iter().filter(|u| !cl.contains(u)).collect();
    let y = family.right_vertices().into_iter().filter(|w| !cr.contains(w)).collect();
    (x, y)
}

/// Trades one chosen edge `e` for two edges of unchosen matchings `p != q`:
/// `e1 in F_p` from an uncovered U-vertex to `e`'s W end, and `e2 in F_q`
/// from `e`'s U end to an uncovered W-vertex. Pairs `(p, q)` are tried in
/// lexicographic order, then chosen edges by index.
pub fn augment_swap2(family: &MatchingFamily, a: &RainbowAssignment) -> Option<AugmentStep> {
    let unchosen = a.unchosen(family.n());
    if unchosen.len() < 2 {
        return None;
    }
    let (x, y) = uncovered(family, a);
    for &p in &unchosen {
        for &q in &unchosen {
            if p == q {
                continue;
            }
            for (owner, e) in a.iter() {
                let e1 = family.matching(p).edge_at_right(e.right).filter(|c| x.contains(&c.left));
                let e2 = family.matching(q).edge_at_left(e.left).filter(|c| y.contains(&c.right));
                if let (Some(e1), Some(e2)) = (e1, e2) {
                    return Some(AugmentStep::new(StepKind::Swap2, vec![(owner, e)], vec![(p, e1), (q, e2)]));
                }
            }
        }
    }
    None
}

/// Re-chooses inside one matching of `F'`: if `F_i` (chosen edge `e`) has an
/// edge `e'` between the uncovered sides avoiding the free-matching edge `f`
/// leaving `e`'s U end into `Y`, then `e` is replaced by `e'` and `f` joins
/// for the free index. Two such `e'` always leave one that avoids `f`, so
/// when nothing applies every `F'` matching has at most one `X`-`Y` edge.
pub fn augment_claim_swap(
    family: &MatchingFamily,
    a: &RainbowAssignment,
    frontier: &FrontierStructures,
) -> Option<AugmentStep> {
    for &i in &frontier.f_prime {
        let e = frontier.r_prime[&i];
        let Some(f) = frontier.free_edge_into_y(family, e.left) else {
            continue;
        };
        let replacement = family.matching(i).edges().iter().copied().find(|c| {
            frontier.x.contains(&c.left) && frontier.y.contains(&c.right) && c.right != f.right
        });
        if let Some(e_new) = replacement {
            debug_assert_eq!(a.get(i), Some(e));
            return Some(AugmentStep::new(
                StepKind::Swap2,
                vec![(i, e)],
                vec![(i, e_new), (frontier.free_index, f)],
            ));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{validate_family, verify_rainbow, Edge};
    use crate::frontier::compute_frontier;
    use crate::oracle::max_rainbow;

    #[test]
    fn swap2_witness_family() {
        let f = validate_family(&[vec![(0, 0)], vec![(1, 0)], vec![(0, 1)]]).unwrap();
        let mut a: RainbowAssignment = [(0, Edge::new(0, 0))].into_iter().collect();
        let step = augment_swap2(&f, &a).expect("swap applies");
        assert_eq!(step.removed, vec![(0, Edge::new(0, 0))]);
        assert_eq!(step.added, vec![(1, Edge::new(1, 0)), (2, Edge::new(0, 1))]);
        step.apply(&mut a);
        assert_eq!(a.len(), 2);
        assert!(verify_rainbow(&f, &a).unwrap());
        assert_eq!(max_rainbow(&f, None).unwrap().max_size, 2);
    }

    #[test]
    fn swap2_needs_two_unchosen() {
        let f = validate_family(&[vec![(0, 0)], vec![(1, 0)]]).unwrap();
        let a: RainbowAssignment = [(0, Edge::new(0, 0))].into_iter().collect();
        assert!(augment_swap2(&f, &a).is_none());
    }

    #[test]
    fn swap2_absent_on_complete_latin() {
        let f = validate_family(&[
            vec![(0, 0), (1, 1), (2, 2)],
            vec![(0, 1), (1, 2), (2, 0)],
            vec![(0, 2), (1, 0), (2, 1)],
        ])
        .unwrap();
        let a: RainbowAssignment =
            [(0, Edge::new(0, 0)), (1, Edge::new(1, 2)), (2, Edge::new(2, 1))].into_iter().collect();
        assert!(augment_swap2(&f, &a).is_none());
    }

    #[test]
    fn claim_swap_picks_xy_edge_avoiding_free_edge() {
        // F_0 chose (0,0) and also has X-Y edges (1,1) and (2,2). The free
        // matching F_1 leaves vertex 0 into Y at (0,1), so (1,1) is unusable
        // and (2,2) is taken.
        let f = validate_family(&[vec![(0, 0), (1, 1), (2, 2)], vec![(0, 1)]]).unwrap();
        let mut a: RainbowAssignment = [(0, Edge::new(0, 0))].into_iter().collect();
        let fr = compute_frontier(&f, &a, 1).unwrap();
        let step = augment_claim_swap(&f, &a, &fr).expect("applies");
        assert_eq!(step.added, vec![(0, Edge::new(2, 2)), (1, Edge::new(0, 1))]);
        step.apply(&mut a);
        assert!(verify_rainbow(&f, &a).unwrap());
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn claim_swap_absent_with_single_blocked_xy_edge() {
        let f = validate_family(&[vec![(0, 0), (1, 1)], vec![(0, 1)]]).unwrap();
        let a: RainbowAssignment = [(0, Edge::new(0, 0))].into_iter().collect();
        let fr = compute_frontier(&f, &a, 1).unwrap();
        assert!(augment_claim_swap(&f, &a, &fr).is_none());
    }
}
