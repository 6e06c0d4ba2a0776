//! `sailsym` command line: JSON reports for fields, continued fractions,
//! sails, symmetries, the class criterion and the basis lemma.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "sailsym", version, about = "Exact Klein sails and palindromic symmetries of 4-dimensional algebraic continued fractions")]
struct Cli {
    /// Worker threads for data-parallel stages; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Where a continued fraction comes from.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct CfSource {
    /// Hyperbolic matrix document `{"matrix": [[...]]}`.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    /// Continued fraction document (matrix or field coordinates).
    #[arg(long, value_name = "FILE")]
    pub cf: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field report for a monic irreducible totally real polynomial.
    Field {
        /// Coefficients, constant term first, e.g. "14,0,-8,0,1".
        #[arg(long, value_name = "COEFFS", conflicts_with = "input", required_unless_present = "input")]
        minpoly: Option<String>,
        /// Field document `{"minpoly": [...]}`.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
    },
    /// Hyperbolicity, eigen-directions and a Dirichlet symmetry search.
    Analyze {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        /// Coefficient bound for the p(A) search.
        #[arg(long, default_value_t = 1)]
        dirichlet_bound: i64,
        #[arg(long, default_value_t = 4)]
        dirichlet_hits: usize,
    },
    /// Truncated sail patches.
    Sail {
        #[command(flatten)]
        source: CfSource,
        /// Sup-norm truncation N.
        #[arg(long)]
        bound: i64,
        /// Stability margin, a rational ≥ 1.
        #[arg(long, default_value = "2")]
        margin: String,
        /// Single cone as a sign string such as "+-+-"; all cones otherwise.
        #[arg(long)]
        cone: Option<String>,
    },
    /// Full report for a candidate symmetry G.
    Symmetry {
        #[command(flatten)]
        source: CfSource,
        /// Matrix document for G.
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
    },
    /// Class criterion with an optional witness.
    Criterion {
        #[command(flatten)]
        source: CfSource,
        /// Witness matrix document X.
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
        /// Coefficient bound of the witnessless search.
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long, default_value_t = 2_000_000)]
        max_candidates: usize,
    },
    /// The eleven-case basis lemma.
    Lemma4 {
        #[command(subcommand)]
        action: Lemma4Action,
    },
    /// Reproduction of the worked quartic example x⁴ − 8x² + 14.
    ExamplePaper,
}

#[derive(Subcommand, Debug)]
enum Lemma4Action {
    /// Seeded sweep over transported templates and synthetic involutions.
    Sweep {
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Case set of one quadruple.
    Classify {
        /// Document `{"z": [[...], [...], [...], [...]]}`.
        #[arg(long, value_name = "FILE")]
        z: PathBuf,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::usage("--threads", "must be positive"));
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage("--threads", e.to_string()))?;
    }
    match cli.command {
        Command::Field { minpoly, input } => commands::field(minpoly.as_deref(), input.as_deref()),
        Command::Analyze { matrix, dirichlet_bound, dirichlet_hits } => {
            commands::analyze(&matrix, dirichlet_bound, dirichlet_hits)
        }
        Command::Sail { source, bound, margin, cone } => commands::sail(&source, bound, &margin, cone.as_deref()),
        Command::Symmetry { source, g } => commands::symmetry(&source, &g),
        Command::Criterion { source, witness, bound, max_candidates } => {
            commands::criterion(&source, witness.as_deref(), bound, max_candidates)
        }
        Command::Lemma4 { action: Lemma4Action::Sweep { bound, samples, seed } } => {
            commands::lemma4_sweep(bound, samples, seed)
        }
        Command::Lemma4 { action: Lemma4Action::Classify { z } } => commands::lemma4_classify(&z),
        Command::ExamplePaper => commands::example_paper(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli).and_then(|o| o.emit(out.as_deref())) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
