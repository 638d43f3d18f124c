use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod store;

#[derive(Parser, Debug)]
#[command(name = "qlattice", version, about = "Exact computations in subspace lattices L_n(q)")]
pub struct Cli {
    /// Directory holding cached lattices.
    #[arg(long, global = true, env = "QLATTICE_CACHE", value_name = "DIR")]
    pub cache: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Search node budget.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    /// Search worker threads (0 = all cores).
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub workers: usize,
    /// Seed for randomized commands.
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prints the Gaussian coefficient [n choose k]_q.
    Gaussian { n: u32, k: u32, q: u32 },
    /// Builds L_n(q), writes its cache file and prints the rank numbers.
    Build { n: usize, q: u32 },
    /// Exact extremal search with a JSON certificate.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        /// Comma-separated list such as `wedge,vee` or `broom:3,fork:2`.
        #[arg(long)]
        patterns: String,
        /// Leave out the zero subspace and the whole space.
        #[arg(long, conflicts_with = "full")]
        proper: bool,
        /// Allow every subspace.
        #[arg(long)]
        full: bool,
        /// Restrict to dimensions `a..b` (inclusive).
        #[arg(long, value_name = "a..b")]
        levels: Option<String>,
        /// List every optimal family instead of one.
        #[arg(long)]
        enumerate: bool,
    },
    /// Checks one of the theorems A, B or C on L_n(q).
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        n: usize,
        q: u32,
        /// Broom size for B.
        #[arg(default_value_t = 2)]
        u: usize,
        /// Fork size for B.
        #[arg(default_value_t = 2)]
        v: usize,
    },
    /// Compares ex(L_n(q); Y_k, Y'_k) with ex(L_n(q); chain of k + 2).
    Conjecture { n: usize, q: u32, k: usize },
    /// Runs one push step on a family file.
    Push {
        file: PathBuf,
        #[arg(long, value_enum)]
        direction: PushDirection,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 2)]
        u: usize,
        #[arg(long, default_value_t = 2)]
        v: usize,
        /// Also write the resulting family here.
        #[arg(long, value_name = "FILE")]
        family_out: Option<PathBuf>,
    },
    /// LYM sums of a family file.
    Lym {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = LymMode::Antichain)]
        mode: LymMode,
    },
    /// Compares the specialized detectors with the generic matcher, on a
    /// family file or on seeded random families.
    PatternsCheck {
        file: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u32>,
        /// Patterns to test; defaults to the named catalog.
        #[arg(long)]
        patterns: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Theorem {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PushDirection {
    Shadow,
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LymMode {
    Antichain,
    Ytype,
}

/// Process exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
    Usage = 2,
    TooLarge = 3,
    Budget = 4,
}

fn status_of(err: &anyhow::Error) -> Status {
    match err.downcast_ref::<qlattice::Error>() {
        Some(qlattice::Error::TooLarge { .. }) => Status::TooLarge,
        Some(qlattice::Error::BudgetExceeded { .. }) => Status::Budget,
        _ => Status::Usage,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match commands::run(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            status_of(&e)
        }
    };
    ExitCode::from(status as u8)
}
