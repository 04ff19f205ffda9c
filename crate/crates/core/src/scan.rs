//! Desk-scale scans over `(n, size)` grids.
//!
//! For every `n` in range, a batch of families is either drawn at random or
//! enumerated exhaustively, solved, and optionally refereed by the exact
//! oracle. Trials run in parallel; each trial is a pure function of its
//! seed, and the reduction only sums counts, so a scan is reproducible.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::family::{Edge, Matching, MatchingFamily, Vertex};
use crate::format::{digest, write_instance};
use crate::generators::{random_family, GenSpec};
use crate::oracle::{max_rainbow, OracleError};
use crate::solver::{full_rainbow_threshold, solve_with, SolveStatus, SolverConfig};

/// Default cap on the number of families an exhaustive scan may enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid scan config: {0}")]
    InvalidConfig(String),
    #[error("exhaustive space for n={n}, size={size} has {space} families, above the limit of {limit}")]
    ExhaustiveTooLarge {
        n: usize,
        size: usize,
        space: u128,
        limit: u128,
    },
    #[error("persisting counterexample candidate: {0}")]
    Io(#[from] std::io::Error),
}

/// Matching size as a function of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeRule {
    /// `floor(5n/3)`
    Floor5n3,
    /// `floor(3n/2)`
    Floor3n2,
    /// `n + 1`
    NPlus1,
    Explicit(usize),
}

impl SizeRule {
    pub fn size(self, n: usize) -> usize {
        match self {
            SizeRule::Floor5n3 => full_rainbow_threshold(n),
            SizeRule::Floor3n2 => 3 * n / 2,
            SizeRule::NPlus1 => n + 1,
            SizeRule::Explicit(k) => k,
        }
    }
}

impl fmt::Display for SizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeRule::Floor5n3 => f.write_str("floor_5n_3"),
            SizeRule::Floor3n2 => f.write_str("floor_3n_2"),
            SizeRule::NPlus1 => f.write_str("n_plus_1"),
            SizeRule::Explicit(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for SizeRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "floor_5n_3" => Ok(SizeRule::Floor5n3),
            "floor_3n_2" => Ok(SizeRule::Floor3n2),
            "n_plus_1" => Ok(SizeRule::NPlus1),
            other => other
                .parse()
                .map(SizeRule::Explicit)
                .map_err(|_| format!("unknown size rule `{other}` (floor_5n_3, floor_3n_2, n_plus_1 or an integer)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Random,
    /// Every family of `n` matchings of the given size over a
    /// `(size + extra_vertices)`-per-side universe.
    ExhaustiveTiny,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub size_rule: SizeRule,
    /// Families per `n` in random mode.
    pub trials: usize,
    pub mode: ScanMode,
    pub seed: u64,
    /// Universe per side is `size + extra_vertices`.
    pub extra_vertices: u32,
    pub oracle: bool,
    pub oracle_budget: u64,
    pub exhaustive_limit: u128,
    pub solver: SolverConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_min: 2,
            n_max: 6,
            size_rule: SizeRule::Floor5n3,
            trials: 100,
            mode: ScanMode::Random,
            seed: 0,
            extra_vertices: 0,
            oracle: false,
            oracle_budget: 10_000_000,
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            solver: SolverConfig::from_env(),
        }
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<(), ScanError> {
        if self.trials == 0 {
            return Err(ScanError::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(ScanError::InvalidConfig(format!(
                "bad n range {}..={}",
                self.n_min, self.n_max
            )));
        }
        for n in self.n_min..=self.n_max {
            if self.size_rule.size(n) == 0 {
                return Err(ScanError::InvalidConfig(format!("size rule gives 0 at n={n}")));
            }
            if self.mode == ScanMode::ExhaustiveTiny {
                let size = self.size_rule.size(n);
                let space = exhaustive_space(n, size, self.universe(size));
                if space > self.exhaustive_limit {
                    return Err(ScanError::ExhaustiveTooLarge {
                        n,
                        size,
                        space,
                        limit: self.exhaustive_limit,
                    });
                }
            }
        }
        Ok(())
    }

    fn universe(&self, size: usize) -> u32 {
        size as u32 + self.extra_vertices
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub n: usize,
    pub size: usize,
    pub trials: usize,
    pub solver_complete_count: usize,
    /// Families the oracle showed to have a full rainbow matching.
    pub oracle_full_count: Option<usize>,
    /// Smallest oracle maximum among families the oracle finished.
    pub min_oracle_max: Option<usize>,
    pub oracle_budget_overruns: usize,
    /// Digests of families at or above `floor(5n/3)` the solver did not
    /// complete, sorted.
    pub counterexample_candidates: Vec<String>,
}

struct TrialOutcome {
    complete: bool,
    oracle_max: Option<usize>,
    overrun: bool,
    candidate: Option<MatchingFamily>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `t` for `(n, size)` under base seed `base`.
pub fn trial_seed(base: u64, n: usize, size: usize, t: usize) -> u64 {
    splitmix(splitmix(splitmix(base) ^ n as u64) ^ size as u64 ^ (t as u64).rotate_right(32))
}

/// Number of matchings of exactly `size` edges in a `universe x universe`
/// grid: `C(u, s)^2 * s!`.
pub fn matchings_of_size_count(size: usize, universe: u32) -> u128 {
    let u = universe as u128;
    let s = size as u128;
    if s > u {
        return 0;
    }
    let mut choose = 1u128;
    for i in 0..s {
        choose = choose * (u - i) / (i + 1);
    }
    let fact: u128 = (1..=s).product();
    choose.saturating_mul(choose).saturating_mul(fact)
}

fn exhaustive_space(n: usize, size: usize, universe: u32) -> u128 {
    let per = matchings_of_size_count(size, universe);
    (0..n).try_fold(1u128, |acc, _| acc.checked_mul(per)).unwrap_or(u128::MAX)
}

/// All matchings of exactly `size` edges in `[0, universe)^2`, in a fixed
/// order (left vertices ascending, each unmatched before matched to rights
/// ascending).
pub fn all_matchings_of_size(size: usize, universe: u32) -> Vec<Vec<Edge>> {
    fn rec(u: Vertex, universe: Vertex, size: usize, used: &mut Vec<bool>, cur: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        if u == universe || (universe - u) as usize + cur.len() < size {
            return;
        }
        rec(u + 1, universe, size, used, cur, out);
        for w in 0..universe {
            if !used[w as usize] {
                used[w as usize] = true;
                cur.push(Edge::new(u, w));
                rec(u + 1, universe, size, used, cur, out);
                cur.pop();
                used[w as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, universe, size, &mut vec![false; universe as usize], &mut Vec::new(), &mut out);
    out
}

fn run_trial(config: &ScanConfig, n: usize, size: usize, family: MatchingFamily) -> TrialOutcome {
    let report = solve_with(&family, config.solver);
    let complete = report.status == SolveStatus::Complete;
    let (oracle_max, overrun) = if config.oracle {
        match max_rainbow(&family, Some(config.oracle_budget)) {
            Ok(r) => (Some(r.max_size), false),
            Err(OracleError::BudgetExceeded { .. }) => (None, true),
            Err(OracleError::InstanceTooLarge { .. }) => (None, true),
        }
    } else {
        (None, false)
    };
    let flagged = size >= full_rainbow_threshold(n) && !complete;
    TrialOutcome {
        complete,
        oracle_max,
        overrun,
        candidate: flagged.then_some(family),
    }
}

/// Runs the scan. Counterexample candidates are written to
/// `candidate_dir/<digest>.txt` when a directory is given.
pub fn run_scan(config: &ScanConfig, candidate_dir: Option<&Path>) -> Result<Vec<ScanRow>, ScanError> {
    config.validate()?;
    let mut rows = Vec::new();
    for n in config.n_min..=config.n_max {
        let size = config.size_rule.size(n);
        let universe = config.universe(size);
        let outcomes: Vec<TrialOutcome> = match config.mode {
            ScanMode::Random => (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let spec = GenSpec {
                        n,
                        size,
                        u_max: universe,
                        w_max: universe,
                        seed: trial_seed(config.seed, n, size, t),
                    };
                    let family = random_family(&spec).expect("validated spec");
                    run_trial(config, n, size, family)
                })
                .collect(),
            ScanMode::ExhaustiveTiny => {
                let pool = all_matchings_of_size(size, universe);
                let total = pool.len().pow(n as u32);
                (0..total)
                    .into_par_iter()
                    .map(|mut code| {
                        let mut matchings = Vec::with_capacity(n);
                        for i in 0..n {
                            let edges = pool[code % pool.len()].clone();
                            code /= pool.len();
                            matchings.push(Matching::new(i, edges).expect("enumerated matchings are valid"));
                        }
                        run_trial(config, n, size, MatchingFamily::new(matchings))
                    })
                    .collect()
            }
        };
        let mut row = ScanRow {
            n,
            size,
            trials: outcomes.len(),
            solver_complete_count: 0,
            oracle_full_count: config.oracle.then_some(0),
            min_oracle_max: None,
            oracle_budget_overruns: 0,
            counterexample_candidates: Vec::new(),
        };
        for o in outcomes {
            row.solver_complete_count += usize::from(o.complete);
            row.oracle_budget_overruns += usize::from(o.overrun);
            if let Some(m) = o.oracle_max {
                if m == n {
                    *row.oracle_full_count.as_mut().expect("oracle on") += 1;
                }
                row.min_oracle_max = Some(row.min_oracle_max.map_or(m, |cur| cur.min(m)));
            }
            if let Some(family) = o.candidate {
                let d = digest(&family);
                if let Some(dir) = candidate_dir {
                    std::fs::create_dir_all(dir)?;
                    write_instance(&dir.join(format!("{d}.txt")), &family)?;
                }
                row.counterexample_candidates.push(d);
            }
        }
        row.counterexample_candidates.sort();
        row.counterexample_candidates.dedup();
        rows.push(row);
    }
    Ok(rows)
}

const COLUMNS: [&str; 8] = [
    "n",
    "size",
    "trials",
    "solver_complete",
    "oracle_full",
    "min_oracle_max",
    "oracle_overruns",
    "counterexample_candidates",
];

fn cells(row: &ScanRow) -> [String; 8] {
    let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
    [
        row.n.to_string(),
        row.size.to_string(),
        row.trials.to_string(),
        row.solver_complete_count.to_string(),
        opt(row.oracle_full_count),
        opt(row.min_oracle_max),
        row.oracle_budget_overruns.to_string(),
        if row.counterexample_candidates.is_empty() {
            "-".to_string()
        } else {
            row.counterexample_candidates.join(",")
        },
    ]
}

/// Tab-separated results: header row, then one row per `ScanRow`.
pub fn to_tsv(rows: &[ScanRow]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&cells(row).join("\t"));
        out.push('\n');
    }
    out
}

/// Space-aligned table for terminals.
pub fn to_table(rows: &[ScanRow]) -> String {
    let body: Vec<[String; 8]> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|c| body.iter().map(|r| r[c].len()).chain([COLUMNS[c].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let header = COLUMNS.map(String::from);
    for r in std::iter::once(&header).chain(body.iter()) {
        let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}")).collect();
        writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
    }
    out
}
