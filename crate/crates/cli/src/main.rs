//! `warlab`: simulate, solve, verify and reproduce games of war.

mod commands;
mod config;
mod emit;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "warlab",
    version,
    about = "Simulation and exact analysis of the card game war",
    long_about = "Simulation and exact analysis of the card game war.\n\n\
                  Worker threads default to the WARLAB_WORKERS environment variable, \
                  else the number of logical CPUs. Results never depend on the worker count.\n\n\
                  Exit status: 0 when every requested check passes, 1 when a check fails, \
                  2 on invalid input or I/O errors."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded Monte Carlo games and summarise the number of rounds.
    Simulate(SimulateArgs),
    /// Enumerate a small game exactly and solve for win probability and expected length.
    Exact(ExactArgs),
    /// Run an exact check suite and print a deviation table.
    Verify(VerifyArgs),
    /// Re-run the standard-deck experiments and compare with the reference values.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Base seed; trial i uses stream i of this seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of trials (games, or games per table cell)
    #[arg(long)]
    pub trials: Option<u64>,
    /// Worker threads [default: $WARLAB_WORKERS, else logical CPUs]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output format for the machine-readable file
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Output path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML config file; command-line flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Game: pwar (random draw), fwar (Bradley-Terry top card), classic
    #[arg(long)]
    pub game: Option<String>,
    /// Deck: RxC (R ranks, C copies), R (distinct ranks) or ranks:r1,r2,...
    #[arg(long)]
    pub deck: Option<String>,
    /// Winning rule for pwar: coin, greater-tiecoin, greater, powered, bradley-terry, max-holder
    #[arg(long)]
    pub rule: Option<String>,
    /// Strength function: constant, identity, shifted:<int>, exp:<lambda>
    #[arg(long)]
    pub strength: Option<String>,
    /// Tie policy for classic: war or coin
    #[arg(long)]
    pub tie: Option<String>,
    /// Face-down cards staked per war round
    #[arg(long)]
    pub face_down: Option<usize>,
    /// Initial deal: uniform, coin-split, top-card-to-a
    #[arg(long)]
    pub deal: Option<String>,
    /// Cards dealt to A under the uniform deal [default: half the deck]
    #[arg(long)]
    pub split: Option<usize>,
    /// fwar return order: random, won-card-first, own-card-first
    #[arg(long)]
    pub return_order: Option<String>,
    /// Round cap; capped games are reported as truncated
    #[arg(long)]
    pub max_rounds: Option<u64>,
    /// End the game once a hand holds at most this many cards
    #[arg(long)]
    pub hand_floor: Option<usize>,
    /// Histogram bins
    #[arg(long)]
    pub bins: Option<usize>,
    /// Include one row per trial in the output
    #[arg(long)]
    pub per_trial: bool,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Game: pwar (subset states) or fwar (ordered states on [n])
    #[arg(long)]
    pub game: Option<String>,
    /// pwar deck (at most 14 cards)
    #[arg(long)]
    pub deck: Option<String>,
    /// pwar winning rule
    #[arg(long)]
    pub rule: Option<String>,
    /// Strength function (fwar, or pwar with bradley-terry)
    #[arg(long)]
    pub strength: Option<String>,
    /// fwar deck size (at most 7)
    #[arg(long)]
    pub n: Option<usize>,
    /// Summarise over uniform deals of this many cards to A
    #[arg(long)]
    pub uniform_size: Option<usize>,
    /// Summarise over the deal giving A the top card and every other card with probability 1/2
    #[arg(long)]
    pub eq5_deal: bool,
    /// Summarise over the deal giving A each card with probability 1/2
    #[arg(long)]
    pub coin_split_deal: bool,
    /// Solve in exact rational arithmetic
    #[arg(long)]
    pub rational: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    Rules,
    Theorem,
    Martingales,
    Identity,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Check suite to run
    #[arg(value_enum)]
    pub suite: SuiteArg,
    /// Output format for --out
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Also write the deviation table to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TargetArg {
    Fig1,
    AcesTable,
    Scaling,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Experiment to run
    #[arg(value_enum)]
    pub target: TargetArg,
    #[command(flatten)]
    pub common: CommonArgs,
    /// End games once a hand holds at most this many cards [default: 1]
    #[arg(long)]
    pub hand_floor: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Exact(a) => commands::exact(a),
        Command::Verify(a) => commands::verify(a),
        Command::Reproduce(a) => commands::reproduce(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
