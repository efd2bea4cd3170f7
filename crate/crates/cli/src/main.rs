//! `erdoslab`: run verifications and emit or validate certificates.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check
//! fails, 2 on usage, input or resource errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "erdoslab", version, about = "Exact verification of the elementary proof of Bertrand's postulate")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "ERDOSLAB_JOBS", value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub jobs: Option<u64>,

    /// Write the certificate or table to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Omit `created_at` and timing so output is byte-stable.
    #[arg(long, global = true, env = "ERDOSLAB_NO_TIMESTAMP")]
    pub no_timestamp: bool,

    /// Largest n for which the Chebyshev bound materializes the primorial.
    #[arg(long, global = true, env = "ERDOSLAB_EXACT_PRIMORIAL_MAX", default_value_t = 10_000)]
    pub exact_primorial_max: u64,

    /// Largest n for which the lower bound materializes binom(2n, n).
    #[arg(long, global = true, env = "ERDOSLAB_EXACT_BINOMIAL_MAX", default_value_t = 10_000)]
    pub exact_binomial_max: u64,

    /// Fractional bits of the outward-rounded logarithms.
    #[arg(long, global = true, env = "ERDOSLAB_FRAC_BITS", default_value_t = 32,
          value_parser = clap::value_parser!(u32).range(1..=60))]
    pub frac_bits: u32,

    /// Refuse to sieve beyond this limit.
    #[arg(long, global = true, env = "ERDOSLAB_SIEVE_MAX", default_value_t = erdoslab::primes::DEFAULT_MAX_LIMIT)]
    pub sieve_max: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one lemma for every n in a range.
    Verify {
        /// chebyshev, pb_le_2n, b_le_1, b_eq_0, lower_bound or final_inequality.
        #[arg(long)]
        lemma: erdoslab::LemmaId,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Confirm a prime in (n, 2n) for every n in a range.
    Bertrand {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Use the interval (n, 2n - 2), n > 3.
        #[arg(long)]
        classic_form: bool,
    },
    /// Build or check a prime ladder.
    Ladder {
        #[command(flatten)]
        mode: LadderMode,
    },
    /// Primes 3 mod 4 and 1 mod 4 in (n, 2n) for every n in a range.
    TwoPrimes {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// List Ruth–Aaron pairs (n, n + 1) with n <= limit.
    RuthAaron {
        #[arg(long)]
        limit: u64,
        /// Sum distinct prime factors only.
        #[arg(long)]
        distinct: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Count abundant numbers up to a limit.
    Abundant {
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Certificate file operations.
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LadderMode {
    /// Greedy ladder covering every n <= N.
    #[arg(long, value_name = "N")]
    pub target: Option<u64>,
    /// Check the 14-prime ladder 2, 3, 5, ..., 2503, 4001 up to 4000.
    #[arg(long)]
    pub verify_paper: bool,
    /// Check the ladder in FILE: a JSON array of decimal strings, or an
    /// object with `primes` and `coverage_target`.
    #[arg(long, value_name = "FILE")]
    pub verify: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CertAction {
    /// Parse a certificate, require canonical form, and re-run its check.
    Validate {
        file: PathBuf,
        /// Only check the format; do not recompute.
        #[arg(long)]
        no_recheck: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Cert,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("erdoslab: {e}");
            ExitCode::from(2)
        }
    }
}
