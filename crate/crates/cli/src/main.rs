use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use selfsim::BigInt;

mod commands;

/// Exact arithmetic in free nilpotent groups and their self-similar actions
/// on rooted trees.
#[derive(Debug, Parser)]
#[command(name = "selfsim", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of basic commutators of one weight (Witt formula).
    Witt {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rank: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        weight: u32,
    },
    /// Number of basic commutators with a given multiweight.
    Multirank {
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
    },
    /// Lists the Hall basis of N(rank, class).
    Hall(GroupArgs),
    /// Occurrences of one generator among basic commutators of a weight.
    Arn {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rank: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        weight: u32,
    },
    /// Exponent A such that [G : <g_i^{n_i} z_i>] = (n_1 ... n_r)^A.
    IndexExponent(GroupArgs),
    /// Index of <g_1^{n_1} z_1, ..., g_r^{n_r} z_r> from the closed formula.
    Index {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<usize>,
    },
    /// Normal form of a group expression.
    Collect {
        #[command(flatten)]
        group: GroupArgs,
        /// Expression such as "g1^2 [g2,g1]^-1 g3".
        #[arg(long)]
        expr: String,
    },
    /// Induced generating sequence, pivots and index of a subgroup.
    Subgroup {
        #[command(flatten)]
        group: GroupArgs,
        /// Generator expressions; repeat the flag or separate with ';'.
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<String>,
    },
    /// Self-similar representation from the cyclic virtual endomorphism.
    Rep(RepCommand),
    /// End-to-end checks against known results.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct GroupArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    rank: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    class: u32,
}

#[derive(Debug, Args)]
struct RepCommand {
    #[command(flatten)]
    rep: RepArgs,
    #[command(subcommand)]
    action: RepAction,
}

#[derive(Debug, Clone, Args)]
struct RepArgs {
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    rank: u32,
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    class: u32,
    /// Exponents n_i of the domain generators g_i^{n_i}.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,1,1")]
    exponents: Vec<BigInt>,
    /// Transversal ordering the tree letters. Defaults to the example ordering
    /// for rank 3, class 2, exponents 2,1,1 and to the canonical one otherwise.
    #[arg(long, global = true, value_enum)]
    transversal: Option<TransversalChoice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransversalChoice {
    #[value(name = "paper-example", alias = "example")]
    Example,
    Canonical,
}

#[derive(Debug, Subcommand)]
enum RepAction {
    /// Summary: alphabet, transversal, domain generators and their images.
    Build,
    /// First-level wreath recursion of an element.
    Decompose {
        #[arg(long)]
        elem: String,
    },
    /// Image of a word (comma-separated 1-based letters).
    Act {
        #[arg(long)]
        elem: String,
        #[arg(long, value_parser = parse_word)]
        word: LetterWord,
    },
    /// Depth-truncated portrait.
    Portrait {
        #[arg(long)]
        elem: String,
        #[arg(long)]
        depth: usize,
    },
    /// State closure of the generators (or of --seeds).
    States {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: u64,
        #[arg(long, num_args = 1..)]
        seeds: Vec<String>,
    },
    /// Abelianized matrix, characteristic polynomial and spectral radius.
    Spectral,
    /// Shortest word moved by an element, up to a depth bound.
    Witness {
        #[arg(long)]
        elem: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

/// A word on the tree: comma-separated 1-based letters, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq)]
struct LetterWord(Vec<usize>);

fn parse_word(s: &str) -> Result<LetterWord, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(LetterWord(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid letter {:?}", t.trim()))
        })
        .collect::<Result<_, _>>()
        .map(LetterWord)
}

#[derive(Debug, Subcommand)]
enum VerifyTarget {
    /// Reproduces the rank 3, class 2 worked example.
    Example,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match commands::basis_cap() {
        Ok(cap) => cap,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli, cap) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
