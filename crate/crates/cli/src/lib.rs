//! Command-line front end for `theta-units-core`.
//!
//! Every command builds one JSON object; [`render`] prints it either as
//! indented text or as pretty JSON. Timing goes to stderr so that stdout is
//! deterministic for fixed arguments.

pub mod commands;
pub mod corpus;
pub mod render;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use theta_units_core::{Error, DEFAULT_PREC};

pub use commands::{run, CliError, Output};

#[derive(Debug, Parser)]
#[command(
    name = "theta-units",
    version,
    about = "Theta-function units: evaluate, derive and verify"
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PREC)]
    pub prec: u32,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    B,
    A,
    /// Ramanujan's `g_n`.
    #[value(name = "g")]
    SmallG,
    /// Ramanujan's `G_n`.
    #[value(name = "G")]
    BigG,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate b, a, g or G from the q-series.
    Eval {
        #[arg(long, value_enum, default_value = "b")]
        kind: Kind,
        /// Positive rational, ignored for g and G.
        #[arg(long, default_value = "1")]
        m: String,
        /// Integer for b and a, positive rational for g and G.
        #[arg(long)]
        n: String,
    },
    /// Derive the unit-product closed form of b_{2m,n}.
    Derive {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Check every corpus entry against the engine.
    VerifyPaper {
        #[arg(long)]
        parallel: bool,
        /// Corpus file to use instead of the embedded one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// List admissible pairs (m, n) with 8mn below a bound.
    Enumerate {
        #[arg(long)]
        bound: u64,
        /// Keep both orders of each pair.
        #[arg(long)]
        all: bool,
    },
    /// Class number, genera, forms and unit of a fundamental discriminant.
    Classdata {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Minimal polynomial of a decimal literal.
    Recognize {
        literal: String,
        #[arg(long, default_value_t = 8)]
        max_deg: usize,
    },
    /// g_{7k} and g_{k/7} from the closed form of b_{k,7}.
    DeriveGn {
        #[arg(long)]
        k: u64,
    },
}

/// Process exit status for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::NegativeRadicand | Error::DivisionByZero => 2,
        Error::PrecisionExhausted(_) | Error::SearchExhausted(_) => 3,
        Error::Hypothesis(_) => 4,
        Error::Consistency(_) | Error::NotFound(_) => 1,
    }
}
