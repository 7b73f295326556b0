//! `kbeq`: checks, decomposes and enumerates solutions of
//! `f(x+y) g(x-y) = f(x) f(y) g(x) g(-y)` on finitely generated Abelian groups.
//!
//! Reports go to standard output (or `--output`) as one JSON document; a
//! one-line summary goes to standard error. Exit status: 0 success, 1 the
//! equation or a decomposition validation fails, 2 input or usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kbeq::DEFAULT_TOL;

#[derive(Parser, Debug)]
#[command(name = "kbeq", version, about = "Functional equation toolkit for Abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Group, e.g. "Z^2 x Z/4 x Z/3".
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// Absolute tolerance for approximate values.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Box radius on free coordinates. Input tables are restricted to this box
    /// when given; `synth` and `demo odd-quadratic` default to 6.
    #[arg(long, global = true)]
    pub radius: Option<u32>,

    /// Search-node budget for the enumerators.
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Seed for the randomized suite.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the equation for a pair of tables.
    Check(Pair),
    /// Check the equation with g = f.
    CheckSelf(Single),
    /// Decompose a positive pair as exp{P + l + r}, exp{P + m - r}.
    Decompose(Pair),
    /// Decompose a Hermitian nonvanishing pair.
    DecomposeHermitian(Pair),
    /// Decompose a Hermitian pair that may vanish, on a group with 2X = X.
    DecomposeVanishing(Pair),
    /// Tabulate a solution form on a window.
    Synth {
        /// Solution form JSON (positive or Hermitian).
        #[arg(long)]
        form: PathBuf,
    },
    /// Enumerate even sign pairs solving the equation on a finite group.
    EnumSigns {
        /// Largest group order accepted.
        #[arg(long, default_value_t = kbeq::oracle::DEFAULT_CENSUS_MAX_ORDER)]
        max_order: u64,
    },
    /// Enumerate positive solutions with log-values on a grid.
    EnumKb {
        /// Comma-separated rational log-values.
        #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true)]
        grid: String,
        /// Report only the number of solutions.
        #[arg(long)]
        count_only: bool,
    },
    /// Reproduce a built-in worked example.
    Demo {
        #[arg(value_enum)]
        example: DemoExample,
    },
    /// Run the randomized cross-check suite.
    Suite {
        /// Random forms per group and family.
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
}

#[derive(clap::Args, Debug)]
pub struct Pair {
    /// Table for f.
    #[arg(short = 'f', long = "f")]
    pub f: PathBuf,
    /// Table for g.
    #[arg(short = 'g', long = "g")]
    pub g: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct Single {
    /// Table for f.
    #[arg(short = 'f', long = "f")]
    pub f: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemoExample {
    Counterexample,
    OddQuadratic,
    Vanishing,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("kbeq: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("{}", outcome.summary);
    ExitCode::from(outcome.code)
}
