mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{GenOptions, Kind, EXIT_ERROR};
use config::ConfigArgs;

/// Pinned power-curve beams in rasterized planar sets.
///
/// Exit status: 0 success, 1 error, 2 verification or hard-check failure,
/// 3 search exhausted.
#[derive(Parser)]
#[command(name = "powerbeam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated set and its window sidecar.
    Gen {
        #[arg(long, value_enum, default_value = "random")]
        kind: Kind,
        /// Stripe period in cells.
        #[arg(long, default_value_t = 8)]
        period: usize,
        /// Stripe width in cells.
        #[arg(long, default_value_t = 4)]
        width: usize,
        /// Checkerboard block side in cells.
        #[arg(long, default_value_t = 8)]
        block: usize,
        /// File name inside the output directory.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Search a raster for a certified beam.
    Prospect {
        raster: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Re-check a certificate against a raster.
    Verify {
        certificate: PathBuf,
        raster: PathBuf,
        #[arg(long, default_value_t = 1)]
        refinement: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Evaluate the decomposition, scaling and square-sum checks on a raster.
    Harness {
        raster: PathBuf,
        /// Scale separations for the small-scale deviation table.
        #[arg(long, value_delimiter = ',', default_value = "0.125,0.0625,0.03125")]
        rhos: Vec<f64>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Time the core operations on a random set.
    Bench {
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn run(cli: Cli) -> Result<u8, powerbeam::Error> {
    match cli.command {
        Command::Gen { kind, period, width, block, output, config } => {
            let opts = GenOptions { kind, period, width, block, output };
            commands::gen(&config.resolve()?, &opts)
        }
        Command::Prospect { raster, config } => commands::prospect_cmd(&config.resolve()?, &raster),
        Command::Verify { certificate, raster, refinement, config } => {
            commands::verify_cmd(&config.resolve()?, &certificate, &raster, refinement)
        }
        Command::Harness { raster, rhos, config } => commands::harness_cmd(&config.resolve()?, &raster, &rhos),
        Command::Bench { repeat, config } => commands::bench_cmd(&config.resolve()?, repeat),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
