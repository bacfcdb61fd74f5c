mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use subsearch_core::io::Mode;

#[derive(Parser, Debug)]
#[command(name = "subsearch", version, about = "Submodular search problems and search games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Arithmetic: exact rationals or f64. Defaults to the file's mode.
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<Mode>,

    /// Convergence tolerance for fictitious play.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub tol: f64,

    /// Iteration budget for fictitious play.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub iters: usize,

    /// Seed for instance generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Skip the structural validation that precedes solving.
    #[arg(long, global = true)]
    pub no_validate: bool,

    /// Compact single-line output instead of pretty-printed JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the structural assumptions on f and g.
    Validate { file: PathBuf },
    /// Compute a search order.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveArg::Sidney)]
        method: SolveArg,
    },
    /// Print the series-parallel decomposition tree.
    Decompose { file: PathBuf },
    /// Print the largest maximum-density set.
    Density { file: PathBuf },
    /// Solve the search game on the cost function f.
    Game {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GameArg::Spd)]
        method: GameArg,
    },
    /// Schedule jobs from a DAG file.
    Sched {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveArg::Sidney)]
        method: SolveArg,
    },
    /// Generate an instance file (`schedule` emits a DAG file).
    Gen {
        family: String,
        n: usize,
        /// Seed (alternative to --seed).
        #[arg(value_name = "SEED")]
        seed_arg: Option<u64>,
        /// Subset size for the k-uniform family.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveArg {
    Sidney,
    Spd,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GameArg {
    Spd,
    Modular,
    Approx,
    /// Fictitious play on the full matrix game.
    Oracle,
    /// Exact linear programming on the full matrix game.
    Lp,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: subsearch_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            println!("{}", out.render(cli.json));
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
