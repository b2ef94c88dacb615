// SPDX-License-Identifier: Apache-2.0

//! `aef`: build the airline graph, score airports and run the epidemic
//! experiments. Every command writes into `--out` together with a
//! `provenance.json` record of the effective configuration, seed, tool
//! version and input digests.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::DiseaseFlags;

#[derive(Parser, Debug)]
#[command(name = "aef", version, about = "Airport expected force and pandemic-risk experiments")]
struct Cli {
    /// Worker threads for simulation ensembles (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the seat-weighted airline graph from OpenFlights dumps.
    BuildGraph(BuildGraphArgs),
    /// Expected force and comparison centralities for every airport.
    Scores(ScoresArgs),
    /// Ensemble of epidemics from one seed airport.
    Simulate(SimulateArgs),
    /// Minimal transmission rate at which each seed airport turns pandemic.
    SweepBeta(SweepArgs),
    /// Correlate airport measures with time to pandemic and to peak incidence.
    TimeToPandemic(TimeToPandemicArgs),
    /// Expected-force stability under removal of a country's airports.
    Robustness(RobustnessArgs),
    /// Reed-Frost major-outbreak fractions against the branching-process curve.
    Branching(BranchingArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// JSON configuration; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed for every random stream.
    #[arg(long)]
    pub rng_seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct WorldArgs {
    /// Graph bundle written by `build-graph`.
    #[arg(long)]
    pub graph: PathBuf,
    /// CSV of `iata,population`; other airports get a traffic-based population.
    #[arg(long)]
    pub populations: Option<PathBuf>,
    /// Population of every airport as weighted degree times this factor.
    #[arg(long, conflicts_with = "populations")]
    pub people_per_seat: Option<f64>,
    /// TSV of `country<TAB>region` merged over the bundled region table.
    #[arg(long)]
    pub regions: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildGraphArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// OpenFlights `airports.dat`.
    #[arg(long, required_unless_present = "synthetic")]
    pub airports: Option<PathBuf>,
    /// OpenFlights `routes.dat`.
    #[arg(long, required_unless_present = "synthetic")]
    pub routes: Option<PathBuf>,
    /// TSV of `aircraft_code<TAB>seats` merged over the bundled table.
    #[arg(long)]
    pub seats: Option<PathBuf>,
    /// Seats assumed for unknown or missing equipment.
    #[arg(long)]
    pub default_seats: Option<u32>,
    /// Generate a synthetic scale-free network with this many airports instead.
    #[arg(long, conflicts_with_all = ["airports", "routes", "seats"])]
    pub synthetic: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ScoresArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Graph bundle written by `build-graph`.
    #[arg(long)]
    pub graph: PathBuf,
    /// Only emit these airports (comma-separated IATA codes).
    #[arg(long, value_delimiter = ',')]
    pub iata: Vec<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = ScoreFormat::Csv)]
    pub format: ScoreFormat,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreFormat {
    Csv,
    Json,
    Both,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub world: WorldArgs,
    #[command(flatten)]
    pub disease: DiseaseFlags,
    /// IATA code of the seed airport.
    #[arg(long)]
    pub seed_airport: String,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub world: WorldArgs,
    #[command(flatten)]
    pub disease: DiseaseFlags,
    /// Transmission rates, `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "0.40:0.50:0.01")]
    pub betas: String,
    /// Seed airports (IATA); default draws one per tenth of the AEF range.
    #[arg(long, value_delimiter = ',')]
    pub seed_airports: Vec<String>,
}

#[derive(Args, Debug)]
pub struct TimeToPandemicArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub world: WorldArgs,
    #[command(flatten)]
    pub disease: DiseaseFlags,
    /// Number of seed airports evenly covering the AEF range.
    #[arg(long, default_value_t = 50)]
    pub seeds: usize,
    /// Explicit seed airports (IATA); overrides `--seeds`.
    #[arg(long, value_delimiter = ',')]
    pub seed_airports: Vec<String>,
}

#[derive(Args, Debug)]
pub struct RobustnessArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Graph bundle written by `build-graph`.
    #[arg(long)]
    pub graph: PathBuf,
    /// Removal percentages, `first..last` (inclusive, step 1) or a comma-separated list.
    #[arg(long, default_value = "1..15")]
    pub fractions: String,
    /// Repeats averaged per fraction and scheme.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// Removal schemes.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Scheme::Uniform, Scheme::DegreeWeighted, Scheme::AefWeighted])]
    pub schemes: Vec<Scheme>,
    /// Country whose airports are removed.
    #[arg(long, default_value = "United States")]
    pub country: String,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Uniform,
    DegreeWeighted,
    AefWeighted,
}

#[derive(Args, Debug)]
pub struct BranchingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Reproduction numbers, `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "1.0:3.0:0.1")]
    pub r0: String,
    /// Population of each Reed-Frost outbreak.
    #[arg(long, default_value_t = 1000)]
    pub population: u64,
    /// Empirical estimates per reproduction number.
    #[arg(long, default_value_t = 100)]
    pub dots: usize,
    /// Outbreaks per estimate.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.workers {
        anyhow::ensure!(n >= 1, "--workers must be at least 1");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::BuildGraph(a) => commands::build_graph(a),
        Command::Scores(a) => commands::scores(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::SweepBeta(a) => commands::sweep_beta(a),
        Command::TimeToPandemic(a) => commands::time_to_pandemic(a),
        Command::Robustness(a) => commands::robustness(a),
        Command::Branching(a) => commands::branching(a),
    }
}
