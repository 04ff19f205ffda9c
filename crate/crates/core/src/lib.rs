//! Full rainbow matchings in families of bipartite matchings.
//!
//! A family `F_0, ..., F_{n-1}` of matchings in a bipartite graph has a
//! *full rainbow matching* when one edge can be picked from every matching
//! so that the picked edges are pairwise vertex-disjoint. This crate
//! provides
//!
//! - [`solver`]: a constructive solver built from augmentation moves
//!   (greedy, two-for-one swaps, alternating-path augmentation) that always
//!   completes when every matching has at least `floor(5n/3)` edges;
//! - [`oracle`]: exact maximum rainbow matching by exhaustive search;
//! - [`generators`]: seeded random families, Latin-square partitions of
//!   K_{n,n}, and the tight family of `2n - 2` matchings of size `n`;
//! - [`format`] and [`scan`]: instance files and a reproducible scan runner.
//!
//! ```
//! use rainbow_core::{family::validate_family, solver::{solve_full, SolveStatus}};
//!
//! let family = validate_family(&[vec![(0, 0), (1, 1), (2, 2)], vec![(0, 1), (1, 2), (2, 0)]]).unwrap();
//! let report = solve_full(&family);
//! assert_eq!(report.status, SolveStatus::Complete);
//! ```

pub mod family;
pub mod format;
pub mod frontier;
pub mod generators;
pub mod oracle;
pub mod scan;
pub mod solver;

pub use family::{validate_family, verify_rainbow, Edge, Matching, MatchingFamily, RainbowAssignment};
pub use oracle::{max_rainbow, max_rainbow_second_opinion, OracleResult};
pub use solver::{solve_full, SolveReport, SolveStatus};
