// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::Serialize;

use super::{check_scores, CorrelationCell, ExperimentError};
use crate::centrality::CentralityReport;
use crate::episim::{run_ensemble, DiseaseModel, SimulationConfig, World};
use crate::stats::{shapiro_wilk, ShapiroWilk};
use crate::wan::NodeId;

/// Measures correlated against the outcomes, in table order.
pub const STUDY_MEASURES: [&str; 10] = [
    "aef",
    "t_core",
    "degree",
    "w_degree",
    "eigen",
    "w_eigen",
    "betweenness",
    "w_betweenness",
    "clustering",
    "w_clustering",
];

/// Per-airport predictor columns, indexed by node id.
#[derive(Debug, Clone, Copy)]
pub struct StudyMeasures<'a> {
    pub aef: &'a [f64],
    pub centrality: &'a CentralityReport,
}

impl StudyMeasures<'_> {
    fn row(&self, node: NodeId) -> Vec<f64> {
        let c = self.centrality;
        vec![
            self.aef[node],
            c.t_core[node] as f64,
            c.degree[node] as f64,
            c.weighted_degree[node],
            c.eigenvector[node],
            c.weighted_eigenvector[node],
            c.betweenness[node],
            c.weighted_betweenness[node],
            c.clustering[node],
            c.weighted_clustering[node],
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedOutcome {
    pub seed: NodeId,
    pub iata: String,
    /// Values in [`STUDY_MEASURES`] order.
    pub measures: Vec<f64>,
    pub median_pandemic_day: Option<u32>,
    pub median_peak_day: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureCorrelation {
    pub measure: &'static str,
    pub pandemic_day: CorrelationCell,
    pub peak_day: CorrelationCell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeToPandemicReport {
    pub experiment: &'static str,
    pub rng_seed: u64,
    pub runs: usize,
    pub disease: DiseaseModel,
    pub rows: Vec<SeedOutcome>,
    /// Seeds whose median run never reached pandemic status; left out of
    /// every correlation and normality test.
    pub excluded: Vec<String>,
    pub correlations: Vec<MeasureCorrelation>,
    pub pandemic_day_normality: Option<ShapiroWilk>,
    pub peak_day_normality: Option<ShapiroWilk>,
}

impl TimeToPandemicReport {
    pub fn correlation(&self, measure: &str) -> Option<&MeasureCorrelation> {
        self.correlations.iter().find(|c| c.measure == measure)
    }
}

/// Run an ensemble from every seed and correlate each measure with the
/// median pandemic day and median peak day.
pub fn time_to_pandemic_study(
    world: &World,
    seeds: &[NodeId],
    measures: StudyMeasures<'_>,
    disease: &DiseaseModel,
    runs: usize,
    config: &SimulationConfig,
    base_seed: u64,
) -> Result<TimeToPandemicReport, ExperimentError> {
    check_scores(measures.aef, world.airport_count())?;
    let rows: Vec<SeedOutcome> = seeds
        .par_iter()
        .map(|&seed| {
            let e = run_ensemble(world, disease, seed, runs, config, base_seed)?;
            Ok(SeedOutcome {
                seed,
                iata: e.seed_iata,
                measures: measures.row(seed),
                median_pandemic_day: e.median_pandemic_day,
                median_peak_day: e.median_peak_day,
            })
        })
        .collect::<Result<_, ExperimentError>>()?;

    let kept: Vec<&SeedOutcome> = rows.iter().filter(|r| r.median_pandemic_day.is_some()).collect();
    let excluded = rows.iter().filter(|r| r.median_pandemic_day.is_none()).map(|r| r.iata.clone()).collect();
    let pandemic: Vec<f64> = kept.iter().map(|r| f64::from(r.median_pandemic_day.unwrap())).collect();
    let peak: Vec<f64> = kept.iter().map(|r| f64::from(r.median_peak_day)).collect();
    let correlations = STUDY_MEASURES
        .iter()
        .enumerate()
        .map(|(i, &measure)| {
            let x: Vec<f64> = kept.iter().map(|r| r.measures[i]).collect();
            MeasureCorrelation {
                measure,
                pandemic_day: CorrelationCell::compute(&x, &pandemic),
                peak_day: CorrelationCell::compute(&x, &peak),
            }
        })
        .collect();
    Ok(TimeToPandemicReport {
        experiment: "time-to-pandemic",
        rng_seed: base_seed,
        runs,
        disease: *disease,
        pandemic_day_normality: shapiro_wilk(&pandemic).ok(),
        peak_day_normality: shapiro_wilk(&peak).ok(),
        rows,
        excluded,
        correlations,
    })
}
