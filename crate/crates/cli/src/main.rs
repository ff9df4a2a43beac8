mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bound error: {0}")]
    Bound(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Bound(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum View {
    /// 2-level trees
    C,
    /// 3-level trees
    Tw,
    /// 3-level trees up to the middle vertex
    U,
}

#[derive(Debug, Parser)]
#[command(name = "opcat", version, about = "Finite experiments with categories built from operads")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compose two morphisms given as JSON files: FIRST ∘ SECOND
    Compose {
        #[arg(long, value_enum, default_value_t = View::C)]
        view: View,
        /// uCom, Com, uAs, As, pOp, sOp, cOp, mOp, mOpGenus or free
        #[arg(long)]
        operad: String,
        /// generator arities for the free operad, as a JSON object
        #[arg(long)]
        signature: Option<PathBuf>,
        first: PathBuf,
        second: PathBuf,
    },
    /// Hom-set sizes between all objects up to an arity bound
    Enumerate {
        #[arg(long, value_enum, default_value_t = View::C)]
        view: View,
        #[arg(long)]
        operad: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Normal forms of an operadic graph
    Canonicalize {
        #[arg(long, default_value = "canonical")]
        form: String,
        #[arg(long, default_value_t = 0)]
        start_leaf: usize,
        /// constant in the color bound
        #[arg(long, default_value_t = 9)]
        constant_nine: u32,
        input: PathBuf,
    },
    /// Check an order for admissibility on a truncation
    CheckOrder {
        /// os, gos, d or nerve
        #[arg(long)]
        order: String,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        grading: u32,
    },
    /// Look for comparable pairs in random sequences of morphisms
    ProbeG2 {
        /// d, gos or z2
        #[arg(long)]
        category: String,
        #[arg(long, default_value_t = 10)]
        sequences: usize,
        #[arg(long, default_value_t = 20)]
        length: usize,
        /// target vertices for d, gradings for gos, block length for z2
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Search for an antichain of parallel-edge graphs under the corolla
    Antichain {
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
    /// Unique-lift check for a functor
    CheckFunctor {
        /// tw-u-ucom, tw-u-uas, cs-cob or cpop-fs
        #[arg(long)]
        functor: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 2)]
        grading: u32,
    },
    /// Generator growth for the non-finitely-generated submodules
    Counterexample {
        /// omega or cs
        which: String,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        genus: u32,
    },
    /// compose H F, phi F or factor F on cobordism and graded surjection JSON
    Cobordism {
        op: String,
        inputs: Vec<PathBuf>,
    },
    /// Random substitutions in a semigroup nerve and a comparable pair
    Nerve {
        /// z2, trivial, cyclic:N or positive:N
        #[arg(long, default_value = "z2")]
        semigroup: String,
        #[arg(long, default_value = "1,0,1")]
        object: String,
        #[arg(long, default_value_t = 20)]
        morphisms: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let nl = if out.ends_with('\n') { "" } else { "\n" };
            // a closed pipe downstream is not an error
            let _ = write!(stdout, "{out}{nl}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("opcat: {e}");
            ExitCode::from(e.code())
        }
    }
}
