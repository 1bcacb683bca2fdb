//! `ugame`: sweeps, tables and charts for the coherent-register guessing game.

mod commands;
mod error;
mod output;
mod state_file;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{CurveArgs, Fig3Args};
use crate::error::CliResult;

#[derive(Parser)]
#[command(name = "ugame", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveMode {
    Analytic,
    Numeric,
}

impl CurveMode {
    fn as_str(self) -> &'static str {
        match self {
            CurveMode::Analytic => "analytic",
            CurveMode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Best guessing probability along a gamma grid.
    Curve {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0.0)]
        gamma_start: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_end: f64,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = CurveMode::Numeric)]
        mode: CurveMode,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "UGAME_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Numeric curves for several dimensions, one CSV each plus a combined SVG.
    Fig3 {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, env = "UGAME_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Schmidt coefficients of the best state found at full coherence.
    Schmidt {
        #[arg(long)]
        d: usize,
        #[arg(long, env = "UGAME_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conditional min-entropies for d = 2 along a gamma grid.
    Entropy {
        #[arg(long, default_value_t = 41)]
        steps: usize,
        /// CSV destination, with an SVG chart beside it; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-evaluate every point by SDP and fail on disagreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Guessing probability for a state read from a JSON file.
    Discriminate {
        #[arg(long)]
        state_file: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Check the dual certificate for a two-outcome optimal input.
    Certify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        l: usize,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Curve { d, gamma_start, gamma_end, steps, mode, out, seed, restarts } => {
            commands::curve(&CurveArgs { d, gamma_start, gamma_end, steps, mode, out, seed, restarts })
        }
        Command::Fig3 { dims, steps, out_dir, seed, restarts } => {
            commands::fig3(&Fig3Args { dims, steps, out_dir, seed, restarts })
        }
        Command::Schmidt { d, seed, restarts, out } => commands::schmidt(d, seed, restarts, out.as_deref()),
        Command::Entropy { steps, out, cross_check } => commands::entropy(steps, cross_check, out.as_deref()),
        Command::Discriminate { state_file, gamma, format } => commands::discriminate(&state_file, gamma, format),
        Command::Certify { d, gamma, j, l } => commands::certify(d, gamma, j, l),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
