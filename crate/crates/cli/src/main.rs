mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permwordle::{Permutation, StrategyClass, StrategySpec};

/// Exit codes.
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY_FAILED: u8 = 2;
pub const EXIT_LOOPED: u8 = 3;

#[derive(Parser)]
#[command(name = "permwordle", version, about = "Permutation wordle: play, analyze and verify guessing strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and print every guess with its correct positions.
    Play {
        /// Secret permutation, 1-based, e.g. 4,1,2,3.
        #[arg(long)]
        secret: Permutation,
        /// `cs`, `csl`, `inductive:<top>` or components like `1;2,1;2,3,1`.
        #[arg(long, default_value = "cs")]
        strategy: StrategySpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generating function: secrets solved in exactly r guesses.
    Gf {
        #[command(flatten)]
        target: StrategyArgs,
        /// Evaluator name (`decomposition` or `playback`).
        #[arg(long, default_value = "decomposition")]
        method: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact average number of guesses.
    Avg {
        #[command(flatten)]
        target: StrategyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate every strategy of a family.
    Scan {
        #[arg(long)]
        n: usize,
        /// cyclic, deranged or inductive.
        #[arg(long)]
        class: StrategyClass,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run verification checks.
    Verify {
        /// Check id; see --list.
        #[arg(long, conflicts_with_all = ["all", "list"], required_unless_present_any = ["all", "list"])]
        id: Option<String>,
        #[arg(long, requires = "id")]
        min: Option<usize>,
        #[arg(long, requires = "id")]
        max: Option<usize>,
        /// Every check over its default range.
        #[arg(long)]
        all: bool,
        /// List check ids with their default ranges.
        #[arg(long)]
        list: bool,
        /// Unlock cyclic n = 7 and deranged n = 6 scans (hours of CPU).
        #[arg(long)]
        extended: bool,
        /// Omit wall time so output is reproducible.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Regenerate a reference sequence and compare it.
    Sequence {
        /// A284843, csl-cubic or A385588-prefix.
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reproduce the feedback grid (1) or the generating-function table (2).
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct StrategyArgs {
    #[arg(long, default_value = "cs")]
    strategy: StrategySpec,
    /// Length; required for `cs` and `csl`.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Refuse scans estimated above this many elementary steps.
    #[arg(long, default_value_t = permwordle::analysis::DEFAULT_MAX_COST)]
    max_cost: u128,
    /// Run even when the estimate exceeds --max-cost.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output. Relative paths are
    /// resolved against $PERMWORDLE_OUT_DIR when it is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
