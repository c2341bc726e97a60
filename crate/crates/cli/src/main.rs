//! `pellforge` command-line driver.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "pellforge", version, about = "Pell-type families of large integral points on elliptic curves")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: PELLFORGE_JOBS, else available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Write output to FILE instead of stdout.
    #[arg(short = 'o', long = "output", global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Template and coefficient system for a signature.
    Build {
        #[arg(long, value_name = "a,b,q,x,y")]
        sig: String,
    },
    /// Eliminate variables from a signature's coefficient system.
    Reduce(ReduceArgs),
    /// Solve the (0,1,2,4,5) system exactly.
    SolveCase1,
    /// Re-derive the degree-4 Case I analysis step by step.
    Appendix,
    /// Enumerate solutions of a system mod p.
    Scan {
        system: PathBuf,
        #[arg(short = 'p', long)]
        prime: u64,
        /// Hold a variable at a residue (repeatable).
        #[arg(long = "fix", value_name = "VAR=VAL")]
        fix: Vec<String>,
        /// Single-threaded scan.
        #[arg(long)]
        serial: bool,
    },
    /// Newton-lift a seed mod p to p^K.
    Lift {
        system: PathBuf,
        /// Residues mod p, comma separated, in system variable order.
        #[arg(long, value_name = "r1,r2,...")]
        seed: String,
        #[arg(short = 'p', long)]
        prime: u64,
        #[arg(short = 'K', long = "precision", default_value_t = 64)]
        precision: u32,
    },
    /// Recognize a p-adic residue as a root of a small integer polynomial.
    Algdep(AlgdepArgs),
    /// Integral points from a Pell-type family.
    Pell(PellArgs),
    /// Certify identities or the whole corpus of known values.
    Verify {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        corpus: bool,
        /// JSON family with fields X, A, B, Q, Y.
        #[arg(long, value_name = "FILE")]
        family: Option<PathBuf>,
    },
    /// log x / log max(|A|^(1/2), |B|^(1/3)).
    Rho {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_name = "a,b,q,x,y")]
    pub sig: String,
    /// Stop once at most this many variables remain.
    #[arg(long)]
    pub target_vars: Option<usize>,
    /// Variables kept through the linear phase (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub protected: Option<Vec<String>>,
    /// Linear steps with polynomial pivots allowed before resultants.
    #[arg(long, default_value_t = 1)]
    pub permissive: usize,
}

#[derive(Args, Debug)]
pub struct AlgdepArgs {
    /// Residue mod p^K.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "system", conflicts_with = "system")]
    pub value: Option<String>,
    #[arg(short = 'p', long)]
    pub prime: u64,
    #[arg(short = 'K', long = "precision")]
    pub precision: u32,
    #[arg(long, default_value_t = 8)]
    pub dmax: usize,
    /// Re-lift a coordinate of this system instead of taking --value, doubling
    /// the precision until a candidate verifies.
    #[arg(long, value_name = "FILE", requires_all = ["seed", "var"])]
    pub system: Option<PathBuf>,
    #[arg(long, value_name = "r1,r2,...")]
    pub seed: Option<String>,
    #[arg(long, value_name = "VAR")]
    pub var: Option<String>,
    /// Largest precision requested from the re-lift.
    #[arg(long, default_value_t = 256)]
    pub max_precision: u32,
}

#[derive(Args, Debug)]
pub struct PellArgs {
    /// `caseI`, `letter`, or a JSON family file.
    #[arg(long, default_value = "letter")]
    pub family: String,
    /// Multiplier with κQ(t) required to be a square (default 1 for caseI, 2 for letter).
    #[arg(long)]
    pub kappa: Option<u64>,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = commands::emit(&cli, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
