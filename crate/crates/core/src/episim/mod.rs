// SPDX-License-Identifier: Apache-2.0

//! Stochastic metapopulation SEIR simulation over the airline network.
//!
//! Each airport hosts a well-mixed subpopulation. A simulated day first
//! moves travellers along routes, then runs a chain-binomial SEIR update
//! inside every subpopulation. The module also carries the Reed-Frost
//! branching model used to relate outbreak probability to `R0`.

mod detect;
mod disease;
mod reed_frost;
mod regions;
mod run;
mod world;

pub use detect::{detect_pandemic, units_over_threshold, PandemicCriterion, PandemicRule};
pub use disease::DiseaseModel;
pub use reed_frost::{reed_frost_final_size, reed_frost_fixed_point, reed_frost_simulate, DEFAULT_MAJOR_THRESHOLD};
pub use regions::{RegionId, RegionTable, REGION_COUNT, REGION_NAMES};
pub use run::{
    run_ensemble, simulate, EnsembleSummary, RunSummary, SimulationConfig, SimulationOutcome, DEFAULT_MAX_DAYS,
    DEFAULT_RUNS,
};
pub use world::{
    build_world, parse_populations, synthetic_population, Compartments, DayStats, World, DEFAULT_RHO,
    SEED_FRACTION,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("no region mapping for {} countries: {}", .0.len(), .0.join(", "))]
    UnmappedCountries(Vec<String>),
    #[error("region table line {line}: {message}")]
    RegionTable { line: usize, message: String },
    #[error("population table line {line}: {message}")]
    PopulationTable { line: usize, message: String },
    #[error("parameter {name} = {value} is out of range")]
    BadParameter { name: &'static str, value: f64 },
    #[error("airport index {0} is not in the world")]
    UnknownAirport(usize),
    #[error("an ensemble needs at least one run")]
    NoRuns,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Draw from `Binomial(n, p)`, short-circuiting the trivial cases.
pub(crate) fn binomial<R: rand::Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    use rand_distr::Distribution;
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    rand_distr::Binomial::new(n, p).expect("probability in (0, 1)").sample(rng)
}
