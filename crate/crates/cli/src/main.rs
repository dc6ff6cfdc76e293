//! `symorder`: seeded batch runs over symmetric random-matrix ensembles.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 for numeric
//! failures.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "symorder", version, about = "Irrep statistics of symmetric random matrices")]
struct Cli {
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    Cyclic,
    Tetra,
    Octa,
    Cube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GroupArgs {
    #[arg(long, value_enum)]
    group: GroupKind,
    /// Order of the cyclic group (required for `--group cyclic`).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; a `<out>.manifest.json` is written next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample one invariant Hamiltonian and write it in matrix text format.
    Build {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Irrep-block spectra of a matrix file, checked against its dense spectrum.
    Spectrum {
        /// Matrix text file.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fraction of sampled Hamiltonians whose ground state lies in each irrep.
    Census {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma0: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Table of the universal SU(2) variance factors.
    Su2Widths {
        #[arg(long, default_value_t = 10)]
        jmax: u32,
        #[arg(long, default_value_t = 512)]
        quad_points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ground-state angular momentum distribution for a dimension table.
    Gsdist {
        /// CSV with header `twoJ,dim`.
        #[arg(long)]
        dims: PathBuf,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Largest J allowed in the table (defaults to the table's own maximum).
        #[arg(long)]
        jmax: Option<u32>,
        #[arg(long, default_value_t = 512)]
        quad_points: usize,
        /// Overall width scale; the distribution does not depend on it.
        #[arg(long, default_value_t = 1.0)]
        sigma0: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump a group's generators and pair-orbit structure as JSON.
    Group {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| commands::run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
