use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod compute;
mod failure;
mod input;
mod report;
mod selftest;

use failure::Failure;

#[derive(Parser)]
#[command(
    name = "powerindex",
    version,
    about = "Exact Banzhaf and Shapley-Shubik indices of weighted majority games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute power indices of one game
    Compute(ComputeArgs),
    /// Write a random game
    Gen(GenArgs),
    /// Time the transform pipelines against the DP baselines
    Bench(BenchArgs),
    /// Run a quick correctness battery
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IndexChoice {
    Banzhaf,
    Shapley,
    Both,
}

impl IndexChoice {
    pub fn banzhaf(self) -> bool {
        self != IndexChoice::Shapley
    }

    pub fn shapley(self) -> bool {
        self != IndexChoice::Banzhaf
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Fps,
    Dp,
    Brute,
    AllCompare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Exactness {
    Rational,
    Float,
    Both,
}

#[derive(Args)]
struct ComputeArgs {
    /// Game file (text or JSON); `-` or nothing reads standard input
    input: Option<PathBuf>,
    /// Inline game in the text format, `/` separating lines, e.g. "3 4 / 3 2 1"
    #[arg(long, conflicts_with = "input")]
    game: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    index: IndexChoice,
    #[arg(long, value_enum, default_value = "fps")]
    method: MethodChoice,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long, value_enum, default_value = "both")]
    exact: Exactness,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GameFormat {
    Text,
    Json,
}

#[derive(Args)]
struct GenArgs {
    /// Number of players
    #[arg(long, short = 'n')]
    players: usize,
    /// Weights are drawn uniformly from 1..=max-weight
    #[arg(long, default_value_t = 100)]
    max_weight: u64,
    /// Fixed quota (clamped to [1, w(N)])
    #[arg(long, conflicts_with = "fraction")]
    quota: Option<u64>,
    /// Quota as a fraction of the total weight, e.g. 2/3
    #[arg(long, default_value = "1/2")]
    fraction: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: GameFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Player counts of the grid
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    pub players: Vec<usize>,
    /// Quotas of the grid
    #[arg(long, value_delimiter = ',', default_value = "16384,65536,262144")]
    pub quotas: Vec<u64>,
    #[arg(long, value_enum, default_value = "banzhaf")]
    pub index: IndexChoice,
    /// Timed runs per cell; the table reports medians
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub repetitions: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only time the transform pipelines
    #[arg(long)]
    pub skip_dp: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random small games checked against brute force
    #[arg(long, default_value_t = 200)]
    pub games: usize,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::other(format!("cannot write output: {e}"))),
    }
}

fn run_compute(args: ComputeArgs) -> Result<(), Failure> {
    let game = input::load(args.input.as_deref(), args.game.as_deref())?;
    let report = compute::run(&game, args.index, args.method)?;
    emit(
        &report::render(&report, args.format, args.exact),
        args.out.as_deref(),
    )
}

fn run_gen(args: GenArgs) -> Result<(), Failure> {
    let rule = match args.quota {
        Some(q) => powerindex::QuotaRule::Fixed(q),
        None => input::parse_fraction(&args.fraction)?,
    };
    let game = powerindex::random_game(args.players, args.max_weight, rule, args.seed)
        .map_err(Failure::from)?;
    let text = match args.format {
        GameFormat::Text => game.to_text(),
        GameFormat::Json => {
            serde_json::to_string(&game).map_err(|e| Failure::other(e.to_string()))? + "\n"
        }
    };
    emit(&text, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => run_compute(args),
        Command::Gen(args) => run_gen(args),
        Command::Bench(args) => bench::run(&args).and_then(|csv| emit(&csv, args.out.as_deref())),
        Command::Selftest(args) => selftest::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
