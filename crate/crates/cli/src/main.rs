//! `dioset`: membership, covers, isolation certificates and the explicit
//! constructions from the command line.
//!
//! Exit codes: 0 success, 1 internal or precision failure, 2 hypothesis
//! violation, 3 parse or usage error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "dioset", version, about = "Exact decisions for Diophantine sets D(gamma, tau)")]
pub struct Cli {
    /// key=value file with defaults (gamma, tau, q, oracle, format, output,
    /// exec, start_precision, max_precision)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result here (atomically) instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Execution mode of the scans
    #[arg(long, global = true, value_enum)]
    exec: Option<ExecMode>,

    /// First precision tried by enclosure comparisons, in bits
    #[arg(long, global = true)]
    start_precision: Option<u32>,

    /// Largest precision tried before giving up, in bits
    #[arg(long, global = true)]
    max_precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// gamma: p/q, decimal, (a+b*sqrt(d))/c, phi or silver
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// tau: p/q, decimal or log(alpha)/log(n)
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether xi lies in D(gamma, tau)
    Member {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Also run the brute-force check over q <= Q and report agreement
        #[arg(long, value_name = "Q")]
        oracle: Option<String>,
    },
    /// Cover [0, 1] by excluded intervals with q <= Q; summary, measure
    /// bracket and touching points
    Cover {
        #[command(flatten)]
        params: ParamArgs,
        /// Denominator cutoff
        #[arg(long, short = 'q', value_name = "Q")]
        q: Option<String>,
        /// Write the merged intervals as CSV
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Certify xi as isolated between I(left) and I(right)
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[command(flatten)]
        params: ParamArgs,
        /// p/q whose interval ends at xi
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        /// p/q whose interval starts at xi
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Silver-ratio family: alpha = (n + sqrt(n^2+4))/2 isolated in
    /// D(1/alpha, log(alpha)/log(n))
    #[command(visible_alias = "theorem1")]
    Silver {
        /// n >= 2
        #[arg(allow_hyphen_values = true)]
        n: Option<i64>,
        /// Inclusive range a..b (or a..=b)
        #[arg(long, conflicts_with = "n")]
        range: Option<String>,
    },
    /// Equivalent representative alpha' = (m alpha + 1)/((2m+1) alpha + 2),
    /// m = floor(3 * 2^tau / gamma)
    #[command(visible_alias = "theorem2")]
    Transform {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Search the default grid for parameters isolating alpha'
        #[arg(long)]
        search: bool,
        /// Denominator cutoff of the search
        #[arg(long, value_name = "Q", default_value_t = 1000)]
        search_q: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let config = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config: {e}");
                return ExitCode::from(3);
            }
        },
        None => Config::default(),
    };
    match commands::run(&cli, &config) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
