// SPDX-License-Identifier: Apache-2.0

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "pellconic", version, about = "Arithmetic of Pell conics X² − ΔY² = 4")]
pub struct Cli {
    /// Emit one structured JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Facts about the conic of a radicand.
    Conic {
        #[command(subcommand)]
        cmd: ConicCmd,
    },
    /// Sum of two points.
    Add {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Give twice: `--point x,y --point x,y`.
        #[arg(long, allow_hyphen_values = true, num_args = 1, required = true)]
        point: Vec<String>,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Scalar multiple k·P.
    Mul {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 2)]
        k: i128,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// All points modulo n.
    Points {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Group structure of C(ℤ/p^k).
    Structure {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Local zeta function at p.
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        p: u64,
        /// Number of point counts N_1..N_r to compare.
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Group-order primality tests.
    Primality {
        #[command(subcommand)]
        cmd: PrimalityCmd,
    },
    /// Stage-1 p−1 or p±1 factoring.
    Factor {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Single base (p1) or seed x0 (pell) instead of the standard list.
        #[arg(long)]
        base: Option<u64>,
    },
    /// First 2-descent.
    Descent {
        #[arg(long)]
        disc: i64,
    },
    /// Narrow class group.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Naive and canonical heights of a rational point.
    Height {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Doublings for the limit definition.
        #[arg(long, default_value_t = 8)]
        k: u32,
    },
    /// L(1, χ_Δ).
    Lfunction {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Both sides of the class-number identity for a real discriminant.
    Bsd(BsdArgs),
}

#[derive(Subcommand)]
pub enum ConicCmd {
    Info {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
}

#[derive(Subcommand)]
pub enum PrimalityCmd {
    /// Lucas test on (ℤ/n)^×.
    Lucas {
        #[arg(long)]
        n: u64,
        /// Base; drawn at random from the seed when omitted.
        #[arg(long)]
        a: Option<u64>,
    },
    /// Conic test; searches for Δ and a point when they are omitted.
    Pell {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        disc: Option<i64>,
        #[arg(long)]
        point: Option<String>,
    },
    /// Lucas–Lehmer for 2^p − 1.
    Mersenne {
        #[arg(long)]
        p: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Method {
    P1,
    Pell,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct BsdArgs {
    #[arg(long)]
    pub disc: Option<i64>,
    #[command(subcommand)]
    pub sweep: Option<BsdCmd>,
}

#[derive(Subcommand)]
pub enum BsdCmd {
    /// Every fundamental 0 < Δ ≤ max, ordered by Δ.
    Sweep {
        #[arg(long)]
        max: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if !out.stdout.is_empty() {
                print!("{}", out.stdout);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", out.failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
