use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "halftsp", version, about = "Randomized rounding of half-integral TSP solutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an instance: half-integrality, degrees, min cut, metric costs.
    Validate { instance: PathBuf },
    /// Write a generated instance as JSON.
    Generate(GenerateArgs),
    /// Print the critical-cut hierarchy.
    Hierarchy {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Sample 1-trees, one JSON object per line.
    Sample {
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
    },
    /// Run the full rounding for many trials.
    Solve(SolveArgs),
    /// Check the probabilistic bounds on one instance.
    VerifyLemmas(VerifyArgs),
    /// Solve every instance of the standard library and tabulate the results.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub kind: String,
    /// Cycle length, block count or nesting depth, depending on the kind.
    #[arg(long)]
    pub size: usize,
    /// Seed for Euclidean costs; unit costs when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Worker threads; all cores when omitted. Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also build and check the O-join certificate in every trial.
    #[arg(long)]
    pub certificate: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    pub format: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    /// Samples for the Monte Carlo method.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Required with `--method mc`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Raise good edges on both last cuts instead of only the odd ones.
    #[arg(long)]
    pub both_cuts: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = Table::Text)]
    pub format: Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Exact,
    Mc,
}
