//! The `novelty` command line: fit, score, eval, synth, bench and plot.
//!
//! Exit status is 0 on success, 2 for usage, input or format errors and 3
//! when the data is valid but too small to fit a model.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod bench;
pub mod config;
pub mod error;
pub mod eval;
pub mod fit;
pub mod missions;
pub mod plot;
pub mod score;
pub mod synth;

pub use config::{Overrides, RunConfig};
pub use error::{CliError, EXIT_INPUT, EXIT_INSUFFICIENT, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "novelty", version, about = "Per-frame motion novelty scores from IMU traces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on normal missions (<stem>.csv with <stem>.frames).
    Fit {
        #[command(flatten)]
        common: Overrides,
        missions: Vec<PathBuf>,
    },
    /// Write per-frame score CSVs for missions.
    Score {
        #[command(flatten)]
        common: Overrides,
        missions: Vec<PathBuf>,
    },
    /// Report flag rates for labeled missions (normal:<path>, abnormal:<path>).
    Eval {
        #[command(flatten)]
        common: Overrides,
        /// Label list of `<label> <path>` lines, as written by `synth`.
        #[arg(long, value_name = "FILE")]
        labels: Option<PathBuf>,
        missions: Vec<String>,
    },
    /// Generate synthetic normal and flip missions.
    Synth(synth::SynthArgs),
    /// Time single-frame scoring against the frame budget.
    Bench(bench::BenchArgs),
    /// Draw score CSVs as an SVG line chart.
    Plot {
        #[command(flatten)]
        common: Overrides,
        scores: Vec<PathBuf>,
    },
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Fit { common, missions } => {
            let r = fit::run(common, missions)?;
            println!(
                "fit {} windows from {} missions, d = {}, k = {} -> {}",
                r.n,
                r.missions.len(),
                r.d,
                r.k,
                r.model.display()
            );
        }
        Command::Score { common, missions } => {
            for path in score::run(common, missions)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Eval { common, labels, missions } => {
            print!("{}", eval::run(common, missions, labels.as_ref())?.to_text());
        }
        Command::Synth(args) => {
            let written = synth::run(args)?;
            println!("wrote {} missions to {}", written.len(), args.out.display());
        }
        Command::Bench(args) => print!("{}", bench::run(args)?.to_text()),
        Command::Plot { common, scores } => {
            plot::run(common, scores)?;
        }
    }
    Ok(())
}
