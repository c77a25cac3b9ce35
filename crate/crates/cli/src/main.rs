//! Command-line front end: solve, synthesize, descend, and gframe.

mod commands;
mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "jfod",
    about = "Exact minimization of the joint frame operator distance over weighted designs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the level vector, optimal spectra, and the minimal value.
    Solve {
        /// Problem file (JSON).
        problem: PathBuf,
        /// Report destination; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Echo the tolerance table to stdout.
        #[arg(long = "tol-report")]
        tol_report: bool,
    },
    /// Solve and construct a design attaining the minimum, with certificates.
    Synthesize {
        problem: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Accepted for interface stability; the construction is
        /// deterministic and does not consume randomness.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "tol-report")]
        tol_report: bool,
    },
    /// Run seeded projected-gradient starts and report gaps to the minimum.
    Descend {
        problem: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Number of random starts.
        #[arg(long, default_value_t = 20)]
        starts: usize,
        /// Base seed; start k uses seed + k. Falls back to the problem
        /// file's seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "tol-report")]
        tol_report: bool,
    },
    /// Best operator-family approximation of a PSD matrix.
    Gframe {
        problem: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long = "tol-report")]
        tol_report: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve {
            problem,
            out,
            tol_report,
        } => commands::cmd_solve(problem, out.as_deref(), *tol_report),
        Command::Synthesize {
            problem,
            out,
            seed: _,
            tol_report,
        } => commands::cmd_synthesize(problem, out.as_deref(), *tol_report),
        Command::Descend {
            problem,
            out,
            starts,
            seed,
            tol_report,
        } => commands::cmd_descend(problem, out.as_deref(), *starts, *seed, *tol_report),
        Command::Gframe {
            problem,
            out,
            tol_report,
        } => commands::cmd_gframe(problem, out.as_deref(), *tol_report),
    };
    if let Err(failure) = result {
        eprintln!("error: {}", failure.message());
        std::process::exit(failure.code());
    }
}
