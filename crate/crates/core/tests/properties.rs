use std::collections::BTreeSet;

use proptest::prelude::*;
use rainbow_core::family::{Edge, Matching, MatchingFamily, RainbowAssignment};
use rainbow_core::format::{digest, parse_instance, read_instance, to_canonical, to_json, write_instance};
use rainbow_core::frontier::compute_frontier;
use rainbow_core::generators::{cyclic_latin_square, drisko_tight, knn_partition_family, latin_family, random_family, GenSpec};
use rainbow_core::solver::{greedy_extend, solve_with, SolverConfig};
use rainbow_core::{max_rainbow, max_rainbow_second_opinion, solve_full, verify_rainbow, SolveStatus};

/// Drops pairs that clash with an earlier one, leaving a matching.
fn to_matching(index: usize, pairs: Vec<(u32, u32)>) -> Matching {
    let mut lefts = BTreeSet::new();
    let mut rights = BTreeSet::new();
    let edges = pairs
        .into_iter()
        .filter(|&(u, w)| lefts.insert(u) & rights.insert(w))
        .map(|(u, w)| Edge::new(u, w))
        .collect();
    Matching::new(index, edges).unwrap()
}

fn small_family(max_n: usize, max_size: usize, universe: u32) -> impl Strategy<Value = MatchingFamily> {
    prop::collection::vec(prop::collection::vec((0..universe, 0..universe), 0..=max_size), 1..=max_n).prop_map(
        |raw| {
            MatchingFamily::new(
                raw.into_iter()
                    .enumerate()
                    .map(|(i, pairs)| to_matching(i, pairs))
                    .collect(),
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracles_agree(f in small_family(4, 4, 5)) {
        let fast = max_rainbow(&f, None).unwrap();
        let slow = max_rainbow_second_opinion(&f).unwrap();
        prop_assert_eq!(fast.max_size, slow.max_size);
        prop_assert!(verify_rainbow(&f, &fast.witness).unwrap());
        prop_assert_eq!(fast.witness.len(), fast.max_size);
        prop_assert!(fast.max_size <= f.n().min(f.union_matching_number()));
    }

    #[test]
    fn dropping_a_matching_costs_at_most_one(f in small_family(4, 4, 5)) {
        prop_assume!(f.n() >= 2);
        let full = max_rainbow(&f, None).unwrap().max_size;
        let sub = MatchingFamily::from_edges(
            f.matchings()[1..].iter().map(|m| m.edges().iter().map(|e| (e.left, e.right)).collect::<Vec<_>>()),
        )
        .unwrap();
        let part = max_rainbow(&sub, None).unwrap().max_size;
        prop_assert!(part <= full && full <= part + 1);
    }

    #[test]
    fn solver_never_beats_oracle(f in small_family(5, 5, 6)) {
        let report = solve_with(&f, SolverConfig::default().checked());
        prop_assert!(verify_rainbow(&f, &report.assignment).unwrap());
        let best = max_rainbow(&f, None).unwrap().max_size;
        prop_assert!(report.size() <= best);
        if report.status == SolveStatus::Complete {
            prop_assert_eq!(best, f.n());
        }
    }

    #[test]
    fn frontier_partitions(f in small_family(5, 5, 6), drop in 0usize..5) {
        let (mut a, _) = greedy_extend(&f, &RainbowAssignment::new());
        let free = drop % f.n();
        a.remove(free);
        let fr = compute_frontier(&f, &a, free).unwrap();
        let covered_l = a.covered_left();
        let covered_r = a.covered_right();
        prop_assert!(fr.x.is_disjoint(&covered_l));
        prop_assert!(fr.y.is_disjoint(&covered_r));
        prop_assert!(fr.z.is_subset(&covered_l));
        prop_assert_eq!(fr.r_prime.len(), fr.z.len());
        prop_assert_eq!(fr.w_prime.len(), fr.z.len());
        for (i, e) in &fr.r_prime {
            prop_assert_eq!(a.get(*i), Some(*e));
            prop_assert!(fr.z.contains(&e.left));
            prop_assert!(fr.w_prime.contains(&e.right));
            prop_assert!(fr.f_prime.contains(i));
            prop_assert!(fr.free_edge_into_y(&f, e.left).is_some());
        }
    }

    #[test]
    fn canonical_round_trip(f in small_family(5, 5, 8)) {
        let text = to_canonical(&f);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(to_canonical(&back), text);
        prop_assert_eq!(parse_instance(&to_json(&f)).unwrap(), f);
    }

    #[test]
    fn random_family_is_seeded(n in 1usize..6, size in 1usize..6, extra in 0u32..3, seed: u64) {
        let spec = GenSpec { n, size, u_max: size as u32 + extra, w_max: size as u32, seed };
        let f = random_family(&spec).unwrap();
        prop_assert_eq!(&f, &random_family(&spec).unwrap());
        prop_assert_eq!(f.n(), n);
        prop_assert!(f.matchings().iter().all(|m| m.len() == size));
        prop_assert!(f.all_edges().all(|e| e.left < spec.u_max && e.right < spec.w_max));
    }

    #[test]
    fn latin_partitions_cover_knn(n in 1usize..7, seed: u64) {
        let f = knn_partition_family(n, seed).unwrap();
        let edges: BTreeSet<Edge> = f.all_edges().collect();
        prop_assert_eq!(edges.len(), n * n);
        prop_assert!(f.matchings().iter().all(|m| m.len() == n));
    }
}

#[test]
fn cyclic_latin_square_transversals() {
    for n in 1..=6 {
        let f = latin_family(&cyclic_latin_square(n)).unwrap();
        let report = solve_full(&f);
        let best = max_rainbow(&f, None).unwrap().max_size;
        // Cyclic squares of even order have no transversal.
        let expected = if n % 2 == 0 { n - 1 } else { n };
        assert_eq!(best, expected, "n={n}");
        assert!(report.size() <= best);
    }
}

#[test]
fn tight_family_stays_incomplete() {
    for n in 2..=5 {
        let f = drisko_tight(n).unwrap();
        let report = solve_full(&f);
        assert_ne!(report.status, SolveStatus::Complete);
        assert_eq!(max_rainbow(&f, None).unwrap().max_size, n - 1);
        assert!(verify_rainbow(&f, &report.assignment).unwrap());
    }
}

#[test]
fn instance_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight.txt");
    let f = drisko_tight(4).unwrap();
    write_instance(&path, &f).unwrap();
    let back = read_instance(&path).unwrap();
    assert_eq!(back, f);
    assert_eq!(digest(&back), digest(&f));
}
