use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rps", version, about = "Random permutation set entropy toolkit")]
pub struct Cli {
    /// Logarithm base; must exceed 1.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub base: f64,

    /// Decimal places for printed values.
    #[arg(long, global = true, default_value_t = 4)]
    pub precision: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Largest frame size whose events may be materialized
    /// (default 8; 7 for `verify`).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Rps,
    Deng,
    Shannon,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Rps => "rps",
            Kind::Deng => "deng",
            Kind::Shannon => "shannon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    OrderIgnored,
    SingletonOnly,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the permutation events of a frame in canonical order.
    Enumerate {
        #[arg(required = true)]
        labels: Vec<String>,
        #[arg(long)]
        include_empty: bool,
    },

    /// Entropy of a JSON document read from a file or stdin.
    ///
    /// `rps` and `shannon` read `{"elements": [...], "pmf": [{"event": [...], "mass": x}]}`;
    /// `deng` reads `{"elements": [...], "m": [{"set": [...], "mass": x}]}`.
    Entropy {
        /// Input path; `-` or omitted reads stdin.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Kind::Rps)]
        kind: Kind,
        /// Print each focal element's contribution.
        #[arg(long)]
        terms: bool,
        /// Rescale a PMF whose masses do not sum to 1 before evaluating it.
        #[arg(long)]
        renormalize: bool,
    },

    /// Closed-form maximum entropy on a frame of `n` elements.
    Maxent {
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Rps)]
        kind: Kind,
        /// Also print the maximizing distribution as JSON over labels t1..tn.
        #[arg(long)]
        emit_distribution: bool,
    },

    /// Maximum Shannon, Deng and RPS entropies for N = 1..n_max.
    Table { n_max: usize },

    /// Compare a degenerate RPS maximum with its classical counterpart.
    Degenerate {
        n: usize,
        #[arg(long, value_enum)]
        mode: Mode,
    },

    /// Maximize RPS entropy numerically and score it against the closed form.
    Verify {
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 0.1)]
        step_size: f64,
        /// Largest accepted entropy gap and sup distance to the closed-form PMF.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Sup-norm change between iterates that counts as converged.
        #[arg(long, default_value_t = 1e-10)]
        convergence_tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start from a random point instead of the uniform PMF.
        #[arg(long)]
        random_start: bool,
        /// Also run the random-search oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}
