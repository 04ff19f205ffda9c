//! Instance families: seeded random matchings, Latin-square partitions of
//! K_{n,n}, and the tight family on the two perfect matchings of a 2n-cycle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::family::{Edge, Matching, MatchingFamily, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("not a Latin square: {0}")]
    NotLatin(String),
    #[error("n must be at least {min}, got {n}")]
    NTooSmall { n: usize, min: usize },
}

/// Parameters for [`random_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub n: usize,
    pub size: usize,
    pub u_max: u32,
    pub w_max: u32,
    pub seed: u64,
}

impl GenSpec {
    /// Square universe of exactly `size` vertices per side.
    pub fn tight(n: usize, size: usize, seed: u64) -> Self {
        GenSpec {
            n,
            size,
            u_max: size as u32,
            w_max: size as u32,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 || self.size == 0 || self.u_max == 0 || self.w_max == 0 {
            return Err(GenError::InvalidSpec("all fields must be positive".into()));
        }
        if self.size > self.u_max.min(self.w_max) as usize {
            return Err(GenError::InvalidSpec(format!(
                "size {} exceeds min(u_max, w_max) = {}",
                self.size,
                self.u_max.min(self.w_max)
            )));
        }
        Ok(())
    }
}

/// `n` independent uniform matchings of exactly `size` edges in
/// `[0, u_max) x [0, w_max)`. Each matching pairs the first `size` entries of
/// a shuffled U side with those of a shuffled W side; edges are listed by
/// ascending left vertex.
pub fn random_family(spec: &GenSpec) -> Result<MatchingFamily, GenError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut lefts: Vec<Vertex> = (0..spec.u_max).collect();
    let mut rights: Vec<Vertex> = (0..spec.w_max).collect();
    let mut matchings = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        lefts.shuffle(&mut rng);
        rights.shuffle(&mut rng);
        let mut edges: Vec<Edge> = lefts
            .iter()
            .zip(&rights)
            .take(spec.size)
            .map(|(&u, &w)| Edge::new(u, w))
            .collect();
        edges.sort();
        matchings.push(Matching::new(i, edges).expect("shuffled sides are injective"));
    }
    Ok(MatchingFamily::new(matchings))
}

/// Symbol classes of a Latin square with symbols `1..=n`: matching `s - 1`
/// holds the cells `(row, col)` carrying symbol `s`, by ascending row.
pub fn latin_family(square: &[Vec<u32>]) -> Result<MatchingFamily, GenError> {
    let n = square.len();
    if n == 0 {
        return Err(GenError::NotLatin("empty square".into()));
    }
    let mut classes: Vec<Vec<Edge>> = vec![Vec::with_capacity(n); n];
    let mut col_seen = vec![vec![false; n]; n];
    for (i, row) in square.iter().enumerate() {
        if row.len() != n {
            return Err(GenError::NotLatin(format!("row {i} has length {}, expected {n}", row.len())));
        }
        let mut row_seen = vec![false; n];
        for (j, &s) in row.iter().enumerate() {
            if s == 0 || s as usize > n {
                return Err(GenError::NotLatin(format!("symbol {s} at ({i},{j}) outside 1..={n}")));
            }
            let k = s as usize - 1;
            if row_seen[k] {
                return Err(GenError::NotLatin(format!("symbol {s} repeated in row {i}")));
            }
            if col_seen[j][k] {
                return Err(GenError::NotLatin(format!("symbol {s} repeated in column {j}")));
            }
            row_seen[k] = true;
            col_seen[j][k] = true;
            classes[k].push(Edge::new(i as Vertex, j as Vertex));
        }
    }
    let matchings = classes
        .into_iter()
        .enumerate()
        .map(|(k, edges)| Matching::new(k, edges).expect("Latin symbol classes are matchings"))
        .collect();
    Ok(MatchingFamily::new(matchings))
}

/// The cyclic Latin square `L[i][j] = (i + j) mod n + 1`.
pub fn cyclic_latin_square(n: usize) -> Vec<Vec<u32>> {
    (0..n)
        .map(|i| (0..n).map(|j| ((i + j) % n) as u32 + 1).collect())
        .collect()
}

/// The two perfect matchings of the 2n-cycle, `A = {(i,i)}` and
/// `B = {(i, i+1 mod n)}`, each repeated `n - 1` times (A copies first).
pub fn drisko_tight(n: usize) -> Result<MatchingFamily, GenError> {
    if n < 2 {
        return Err(GenError::NTooSmall { n, min: 2 });
    }
    let (a, b) = cycle_matchings(n);
    let mut matchings = Vec::with_capacity(2 * n - 2);
    matchings.extend(std::iter::repeat_n(a, n - 1));
    matchings.extend(std::iter::repeat_n(b, n - 1));
    Ok(MatchingFamily::new(matchings))
}

/// Matching A of [`drisko_tight`]: the diagonal `{(i,i)}`.
pub fn drisko_matching_a(n: usize) -> Matching {
    cycle_matchings(n).0
}

fn cycle_matchings(n: usize) -> (Matching, Matching) {
    let a = (0..n as Vertex).map(|i| Edge::new(i, i)).collect();
    let b = (0..n as Vertex).map(|i| Edge::new(i, (i + 1) % n as Vertex)).collect();
    (
        Matching::new(0, a).expect("diagonal is a matching"),
        Matching::new(1, b).expect("shifted diagonal is a matching"),
    )
}

/// A seeded partition of K_{n,n} into `n` perfect matchings, from the cyclic
/// Latin square with rows, columns and symbols shuffled.
pub fn knn_partition_family(n: usize, seed: u64) -> Result<MatchingFamily, GenError> {
    if n == 0 {
        return Err(GenError::NTooSmall { n, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut symbols: Vec<u32> = (1..=n as u32).collect();
    rows.shuffle(&mut rng);
    cols.shuffle(&mut rng);
    symbols.shuffle(&mut rng);
    let base = cyclic_latin_square(n);
    let square: Vec<Vec<u32>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| symbols[base[r][c] as usize - 1]).collect())
        .collect();
    latin_family(&square)
}

/// A seeded family on which greedy provably stalls one edge short, built to
/// push the solver past its cheap moves.
///
/// The core is `C = {0, .., n-2}` on both sides. Matching `i < n - 1` lists
/// `(i,i)` first, so greedy picks the diagonal and covers exactly `C`. Every
/// other edge touches `C` on at least one side wherever the size allows
/// (at most `2(n-2)` such edges besides `(i,i)`); only the remainder joins
/// two non-core vertices. Every edge of the last matching touches `C`, so
/// greedy cannot add it. Vertices range over `[0, size + extra)` per side.
pub fn planted_stall_family(n: usize, size: usize, extra: u32, seed: u64) -> Result<MatchingFamily, GenError> {
    if n < 2 {
        return Err(GenError::NTooSmall { n, min: 2 });
    }
    let universe = size as u32 + extra;
    let core = (n - 1) as u32;
    if size == 0 || size > 2 * (n - 1) || core > universe {
        return Err(GenError::InvalidSpec(format!(
            "planted stall needs 0 < size <= 2(n-1) and n-1 <= universe, got n={n}, size={size}, universe={universe}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matchings = Vec::with_capacity(n);
    for i in 0..core {
        let touching = (size - 1).min(2 * (core as usize - 1));
        let mut edges = core_touching_edges(&mut rng, universe, core, Some(i), touching, size - 1 - touching)
            .ok_or_else(|| GenError::InvalidSpec(format!("universe {universe} too small for planted stall")))?;
        edges.sort();
        edges.insert(0, Edge::new(i, i));
        matchings.push(Matching::new(i as usize, edges).expect("disjoint by construction"));
    }
    let mut edges = core_touching_edges(&mut rng, universe, core, None, size, 0)
        .ok_or_else(|| GenError::InvalidSpec(format!("universe {universe} too small for planted stall")))?;
    edges.sort();
    matchings.push(Matching::new(n - 1, edges).expect("disjoint by construction"));
    Ok(MatchingFamily::new(matchings))
}

/// Random matching avoiding vertex `skip` on both sides, with `touching`
/// edges meeting the core `[0, core)` on some side and `outside` edges
/// between non-core vertices.
fn core_touching_edges(
    rng: &mut ChaCha8Rng,
    universe: u32,
    core: u32,
    skip: Option<Vertex>,
    touching: usize,
    outside: usize,
) -> Option<Vec<Edge>> {
    let keep = |v: &Vertex| Some(*v) != skip;
    let mut core_l: Vec<Vertex> = (0..core).filter(keep).collect();
    let mut core_r: Vec<Vertex> = (0..core).filter(keep).collect();
    let mut far_l: Vec<Vertex> = (core..universe).collect();
    let mut far_r: Vec<Vertex> = (core..universe).collect();
    core_l.shuffle(rng);
    core_r.shuffle(rng);
    far_l.shuffle(rng);
    far_r.shuffle(rng);

    let mut edges = Vec::with_capacity(touching + outside);
    for _ in 0..outside {
        edges.push(Edge::new(far_l.pop()?, far_r.pop()?));
    }
    // `b` edges enter the core from far lefts, the rest leave core lefts.
    let b_min = touching.saturating_sub(core_l.len());
    let b_max = touching.min(core_r.len()).min(far_l.len());
    if b_min > b_max {
        return None;
    }
    let b = rand::Rng::gen_range(rng, b_min..=b_max);
    for _ in 0..b {
        edges.push(Edge::new(far_l.pop()?, core_r.pop()?));
    }
    let mut rights: Vec<Vertex> = core_r.into_iter().chain(far_r).collect();
    rights.shuffle(rng);
    for _ in 0..touching - b {
        edges.push(Edge::new(core_l.pop()?, rights.pop()?));
    }
    Some(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::max_rainbow;
    use std::collections::BTreeSet;

    fn edges(f: &MatchingFamily) -> Vec<Vec<(u32, u32)>> {
        f.matchings()
            .iter()
            .map(|m| m.edges().iter().map(|e| (e.left, e.right)).collect())
            .collect()
    }

    #[test]
    fn forced_random_family() {
        for seed in [0, 1, 99] {
            let f = random_family(&GenSpec::tight(1, 1, seed)).unwrap();
            assert_eq!(edges(&f), vec![vec![(0, 0)]]);
        }
    }

    #[test]
    fn random_family_k22_space_is_covered() {
        let k22 = [vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]];
        let mut seen = BTreeSet::new();
        for seed in 0..64 {
            let f = random_family(&GenSpec::tight(2, 2, seed)).unwrap();
            let e = edges(&f);
            assert!(e.iter().all(|m| k22.contains(m)));
            assert_eq!(e, edges(&random_family(&GenSpec::tight(2, 2, seed)).unwrap()));
            seen.insert(e);
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn invalid_specs() {
        assert!(random_family(&GenSpec::tight(0, 1, 0)).is_err());
        let spec = GenSpec {
            n: 2,
            size: 4,
            u_max: 3,
            w_max: 5,
            seed: 0,
        };
        assert!(matches!(random_family(&spec), Err(GenError::InvalidSpec(_))));
    }

    #[test]
    fn latin_examples() {
        assert_eq!(edges(&latin_family(&[vec![1]]).unwrap()), vec![vec![(0, 0)]]);
        let f = latin_family(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(edges(&f), vec![vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]);
        assert_eq!(max_rainbow(&f, None).unwrap().max_size, 1);
        let c3 = latin_family(&cyclic_latin_square(3)).unwrap();
        assert!(c3.matchings().iter().all(|m| m.len() == 3));
        assert_eq!(max_rainbow(&c3, None).unwrap().max_size, 3);
    }

    #[test]
    fn latin_rejects_bad_squares() {
        for bad in [
            vec![vec![1, 1], vec![2, 2]],
            vec![vec![1, 2], vec![1, 2]],
            vec![vec![1, 3], vec![2, 1]],
            vec![vec![1, 2], vec![2]],
        ] {
            assert!(matches!(latin_family(&bad), Err(GenError::NotLatin(_))), "{bad:?}");
        }
    }

    #[test]
    fn drisko_shapes() {
        let f2 = drisko_tight(2).unwrap();
        assert_eq!(edges(&f2), vec![vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]);
        assert_eq!(max_rainbow(&f2, None).unwrap().max_size, 1);
        let f3 = drisko_tight(3).unwrap();
        assert_eq!(f3.n(), 4);
        assert!(f3.matchings().iter().all(|m| m.len() == 3));
        assert_eq!(max_rainbow(&f3, None).unwrap().max_size, 2);
        let f4 = drisko_tight(4).unwrap();
        assert_eq!(f4.n(), 6);
        assert_eq!(max_rainbow(&f4, None).unwrap().max_size, 3);
        assert_eq!(drisko_tight(1).unwrap_err(), GenError::NTooSmall { n: 1, min: 2 });
    }

    #[test]
    fn planted_stall_blocks_greedy() {
        use crate::solver::greedy_extend;
        for n in 4..=8 {
            let size = 5 * n / 3;
            for seed in 0..20 {
                let f = planted_stall_family(n, size, 0, seed).unwrap();
                assert!(f.matchings().iter().all(|m| m.len() == size));
                let (a, _) = greedy_extend(&f, &crate::family::RainbowAssignment::new());
                assert_eq!(a.len(), n - 1, "n={n} seed={seed}");
                assert!(!a.is_chosen(n - 1));
                if size <= 2 * n - 3 {
                    let core = (n - 1) as u32;
                    assert!(f.all_edges().all(|e| e.left < core || e.right < core));
                }
            }
        }
        assert!(planted_stall_family(3, 5, 0, 0).is_err());
    }

    #[test]
    fn knn_partitions() {
        assert_eq!(edges(&knn_partition_family(1, 5).unwrap()), vec![vec![(0, 0)]]);
        for seed in 0..8 {
            let f = knn_partition_family(2, seed).unwrap();
            assert_eq!(max_rainbow(&f, None).unwrap().max_size, 1);
            let f4 = knn_partition_family(4, seed).unwrap();
            assert!(max_rainbow(&f4, None).unwrap().max_size >= 3);
            let union: BTreeSet<Edge> = f4.all_edges().collect();
            assert_eq!(union.len(), 16);
        }
    }
}
