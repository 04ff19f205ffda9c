//! `rainbow`: solve, check, generate and scan rainbow matching instances.
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::family::{MatchingFamily, RainbowAssignment};
use rainbow_core::format::{digest, read_instance, write_instance};
use rainbow_core::generators::{
    cyclic_latin_square, drisko_tight, knn_partition_family, latin_family, random_family, GenSpec,
};
use rainbow_core::oracle::{max_rainbow, OracleError, DEFAULT_NODE_BUDGET};
use rainbow_core::scan::{run_scan, to_table, to_tsv, ScanConfig, ScanMode, SizeRule};
use rainbow_core::solver::{full_rainbow_threshold, solve_full, SolveStatus, StepKind};

/// Exit code when the oracle runs out of budget before proving optimality.
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Full rainbow matchings in families of bipartite matchings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the constructive solver on an instance file.
    ///
    /// Exit status: 0 complete, 2 incomplete, 3 counterexample candidate,
    /// 1 on unreadable input.
    Solve {
        file: PathBuf,
        /// Print every augmentation step.
        #[arg(long)]
        trace: bool,
        /// Also compute the exact maximum.
        #[arg(long)]
        oracle: bool,
    },
    /// Exact maximum rainbow matching by exhaustive search.
    Oracle {
        file: PathBuf,
        /// Search node budget.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Write a generated instance and print its digest.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Matching size for `random` (default floor(5n/3)).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Left vertex bound for `random` (default: size).
        #[arg(long)]
        u_max: Option<u32>,
        /// Right vertex bound for `random` (default: size).
        #[arg(long)]
        w_max: Option<u32>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tally solver and oracle outcomes over many families.
    Scan {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// floor_5n_3, floor_3n_2, n_plus_1 or an explicit size.
        #[arg(long, default_value = "floor_5n_3")]
        size_rule: SizeRule,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every family instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Run the oracle on every family.
        #[arg(long)]
        oracle: bool,
        /// Oracle node budget per family.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Vertices per side beyond the matching size.
        #[arg(long, default_value_t = 0)]
        extra_vertices: u32,
        /// Directory for counterexample candidates (default: `<output>.candidates`).
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    LatinCyclic,
    LatinRandom,
    Drisko,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve { file, trace, oracle } => solve(&file, trace, oracle),
        Command::Oracle { file, budget } => oracle(&file, budget),
        Command::Gen {
            kind,
            n,
            size,
            seed,
            u_max,
            w_max,
            output,
        } => {
            let family = generate(kind, n, size, seed, u_max, w_max)?;
            write_instance(&output, &family).with_context(|| format!("writing {}", output.display()))?;
            println!("digest {}", digest(&family));
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            n_min,
            n_max,
            size_rule,
            trials,
            seed,
            exhaustive,
            oracle,
            budget,
            extra_vertices,
            candidates,
            output,
        } => {
            let config = ScanConfig {
                n_min,
                n_max,
                size_rule,
                trials,
                mode: if exhaustive { ScanMode::ExhaustiveTiny } else { ScanMode::Random },
                seed,
                extra_vertices,
                oracle,
                oracle_budget: budget,
                ..ScanConfig::default()
            };
            let dir = candidates.unwrap_or_else(|| {
                let mut name = output.clone().into_os_string();
                name.push(".candidates");
                PathBuf::from(name)
            });
            let rows = run_scan(&config, Some(&dir))?;
            print!("{}", to_table(&rows));
            std::fs::write(&output, to_tsv(&rows)).with_context(|| format!("writing {}", output.display()))?;
            let flagged: usize = rows.iter().map(|r| r.counterexample_candidates.len()).sum();
            if flagged > 0 {
                println!("{flagged} counterexample candidate(s) saved under {}", dir.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<MatchingFamily> {
    read_instance(path).with_context(|| format!("reading {}", path.display()))
}

fn format_assignment(a: &RainbowAssignment) -> String {
    a.iter().map(|(i, e)| format!(" {i}:{e}")).collect()
}

fn solve(path: &Path, trace: bool, with_oracle: bool) -> anyhow::Result<ExitCode> {
    let family = load(path)?;
    let report = solve_full(&family);
    println!("{} {}/{}", report.status, report.size(), report.n);
    println!("rainbow{}", format_assignment(&report.assignment));
    let moves: Vec<String> = StepKind::ALL
        .iter()
        .filter(|&&k| report.counters.count(k) > 0)
        .map(|&k| format!("{k}={}", report.counters.count(k)))
        .collect();
    if !moves.is_empty() {
        println!("moves {}", moves.join(" "));
    }
    if trace {
        print!("{}", report.trace_text());
    }
    if with_oracle {
        match max_rainbow(&family, None) {
            Ok(best) => println!("oracle max {}", best.max_size),
            Err(OracleError::BudgetExceeded { best, .. }) => println!("oracle max >= {} (budget exceeded)", best.max_size),
            Err(e) => bail!(e),
        }
    }
    Ok(ExitCode::from(match report.status {
        SolveStatus::Complete => 0,
        SolveStatus::Incomplete => 2,
        SolveStatus::CounterexampleCandidate => 3,
    }))
}

fn oracle(path: &Path, budget: u64) -> anyhow::Result<ExitCode> {
    let family = load(path)?;
    match max_rainbow(&family, Some(budget)) {
        Ok(best) => {
            println!("max {}", best.max_size);
            println!("witness{}", format_assignment(&best.witness));
            Ok(ExitCode::SUCCESS)
        }
        Err(OracleError::BudgetExceeded { budget, best }) => {
            println!("max >= {}", best.max_size);
            println!("witness{}", format_assignment(&best.witness));
            eprintln!("node budget of {budget} exceeded; the maximum is not proven");
            Ok(ExitCode::from(EXIT_BUDGET))
        }
        Err(e) => bail!(e),
    }
}

fn generate(
    kind: GenKind,
    n: usize,
    size: Option<usize>,
    seed: u64,
    u_max: Option<u32>,
    w_max: Option<u32>,
) -> anyhow::Result<MatchingFamily> {
    if !matches!(kind, GenKind::Random) && (size.is_some() || u_max.is_some() || w_max.is_some()) {
        bail!("--size, --u-max and --w-max only apply to `random`");
    }
    let family = match kind {
        GenKind::Random => {
            let size = size.unwrap_or_else(|| full_rainbow_threshold(n));
            random_family(&GenSpec {
                n,
                size,
                u_max: u_max.unwrap_or(size as u32),
                w_max: w_max.unwrap_or(size as u32),
                seed,
            })?
        }
        GenKind::LatinCyclic => latin_family(&cyclic_latin_square(n))?,
        GenKind::LatinRandom => knn_partition_family(n, seed)?,
        GenKind::Drisko => drisko_tight(n)?,
    };
    Ok(family)
}
