use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod reproduce;

use commands::CliError;

/// Build, determinize, verify and transform self-verifying XNFA.
///
/// Documents and reports go to stdout (or `--out`), diagnostics to stderr.
#[derive(Debug, Parser)]
#[command(name = "svxnfa", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Input automaton document (JSON).
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Write the produced document here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on reachable XDFA states.
    #[arg(long, global = true, value_name = "N")]
    pub max_states: Option<usize>,
    /// Emit JSON documents (the default).
    #[arg(long, global = true, conflicts_with = "dot")]
    pub json: bool,
    /// Emit a Graphviz graph on stdout.
    #[arg(long, global = true)]
    pub dot: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the lower-bound witness machine.
    Witness {
        #[arg(long)]
        n: usize,
        /// Number of symbols; extra symbols reuse the `b` matrix.
        #[arg(long = "alphabet-size", short = 'm', default_value_t = 2)]
        alphabet_size: usize,
        /// Primitive polynomial of degree n-1, e.g. "X^3+X+1".
        #[arg(long)]
        phi: Option<String>,
    },
    /// Symmetric-difference subset construction.
    Determinize,
    /// Check the SV-condition on every reachable state.
    CheckSv,
    /// Describe every accept/reject assignment that makes the machine SV.
    SolveSv {
        /// Print up to this many (fa, fr) splits.
        #[arg(long, default_value_t = 0)]
        enumerate: usize,
    },
    /// Apply one or more changes of basis, verifying each result.
    ChangeBasis {
        /// JSON file holding the matrix as rows of 0/1.
        #[arg(long, group = "basis", value_name = "PATH")]
        matrix: Option<PathBuf>,
        /// Use a random non-singular matrix drawn from this seed.
        #[arg(long, group = "basis", value_name = "SEED")]
        random: Option<u64>,
        /// Produce this many machines from distinct non-identity matrices.
        #[arg(long, group = "basis", value_name = "COUNT")]
        family: Option<usize>,
    },
    /// Run a word; exit 0 on accept, 1 on reject, 6 on an SV violation.
    Classify { word: String },
    /// Minimal XDFA of an SV machine.
    Minimize,
    /// Order of GL(n, Z_2).
    GlOrder {
        #[arg(long)]
        n: usize,
        /// Also count the group by enumeration (n <= 4).
        #[arg(long)]
        enumerate: bool,
    },
    /// Compare word weights against explicit path counting.
    OracleVerify {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Run a named reproduction suite and print a TSV table.
    Reproduce {
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                commands::EXIT_USAGE
            } else {
                0
            });
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
