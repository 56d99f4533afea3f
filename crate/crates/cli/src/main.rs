//! `symdef`: analysis of midpoint-map fibers for pairs of complete
//! intersections — validity checks, bifurcation hypersurfaces, chord-fiber
//! Euler characteristics, grid scans, invariance experiments, and fiber
//! transport.
//!
//! Exit codes: 0 success; 1 failed checks or a mathematical disagreement;
//! 2 unusable input (parse errors report byte offsets); 3 symbolic budget
//! exhausted (artifacts computed so far are kept).

mod args;
mod commands;
mod error;
mod problem;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

const DEFAULT_BUDGET: u64 = 200_000;

#[derive(Parser)]
#[command(
    name = "symdef",
    version,
    about = "Chord-fiber and bifurcation analysis for pairs of complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate both defining systems and their joint position at infinity
    Check {
        /// Problem file
        file: PathBuf,
        /// Step budget for symbolic computation
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Overrides the problem file's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compute the branch-value hypersurface and the hypersurface at infinity
    Bifurcation {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the emitted ideal files
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Analyze the chord fiber over one target point
    Chords {
        file: PathBuf,
        /// Target point: comma-separated rationals (integers, a/b, or decimals)
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Optional directory for report.kv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the fiber Euler characteristic over a 1D or 2D grid
    Scan {
        file: PathBuf,
        /// Axes, e.g. `x3=-1:1:41` or `x1=-1:1:21,x2=0:1:11`
        #[arg(long)]
        grid: String,
        /// Base point for the coordinates the grid does not vary
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Optional directory for scan.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the fiber invariant across random linear images of the second variety
    #[command(name = "generic-h")]
    GenericH {
        file: PathBuf,
        /// Number of random invertible coordinate changes
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Generic sample points per trial
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Carry a fiber point along a straight path of target points
    Transport {
        file: PathBuf,
        /// Path start: comma-separated rationals
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Path end: comma-separated rationals
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Integration steps
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { file, budget, seed } => commands::cmd_check(file, *budget, *seed),
        Command::Bifurcation { file, budget, seed, out } => {
            commands::cmd_bifurcation(file, *budget, *seed, out)
        }
        Command::Chords { file, point, budget, seed, out } => {
            commands::cmd_chords(file, point, *budget, *seed, out.as_deref())
        }
        Command::Scan { file, grid, point, budget, seed, out } => {
            commands::cmd_scan(file, grid, point.as_deref(), *budget, *seed, out.as_deref())
        }
        Command::GenericH { file, trials, samples, budget, seed } => {
            commands::cmd_generic_h(file, *trials, *samples, *budget, *seed)
        }
        Command::Transport { file, from, to, steps, budget, seed } => {
            commands::cmd_transport(file, from, to, *steps, *budget, *seed)
        }
    };
    match result {
        Ok(output) => {
            print!("{}", output.stdout);
            if let Some(msg) = output.failure {
                eprintln!("error: {msg}");
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
