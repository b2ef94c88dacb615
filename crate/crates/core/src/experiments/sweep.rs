// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::Serialize;

use super::{check_scores, CorrelationCell, ExperimentError};
use crate::episim::{run_ensemble, DiseaseModel, SimulationConfig, World};
use crate::wan::NodeId;

/// `0.40, 0.41, ..., 0.50`.
pub fn default_beta_grid() -> Vec<f64> {
    (40..=50).map(|i| f64::from(i) / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub beta: f64,
    /// Whether the ensemble's median outcome is a pandemic.
    pub pandemic: bool,
    pub pandemic_runs: usize,
    pub median_pandemic_day: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub seed: NodeId,
    pub iata: String,
    pub aef: f64,
    /// Smallest grid value whose ensemble median is a pandemic.
    pub minimal_beta: Option<f64>,
    pub cells: Vec<SweepCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub experiment: &'static str,
    pub rng_seed: u64,
    pub runs: usize,
    pub beta_grid: Vec<f64>,
    pub rows: Vec<SweepRow>,
    /// Seeds with no pandemic anywhere on the grid.
    pub never_pandemic: Vec<String>,
    /// AEF against minimal beta over the seeds that have one.
    pub aef_vs_minimal_beta: CorrelationCell,
}

/// Run an ensemble for every seed and every `beta` of the grid, keeping the
/// rest of `disease` fixed, and record the smallest `beta` at which each
/// seed's median run is a pandemic.
#[allow(clippy::too_many_arguments)]
pub fn invasion_threshold_sweep(
    world: &World,
    seeds: &[NodeId],
    aef: &[f64],
    beta_grid: &[f64],
    disease: &DiseaseModel,
    runs: usize,
    config: &SimulationConfig,
    base_seed: u64,
) -> Result<SweepReport, ExperimentError> {
    check_scores(aef, world.airport_count())?;
    if !disease.is_simple_seir() {
        return Err(ExperimentError::NotSimpleSeir);
    }
    if beta_grid.is_empty() || beta_grid.windows(2).any(|w| w[0] >= w[1]) || beta_grid[0] <= 0.0 {
        return Err(ExperimentError::BadGrid("beta values must be positive and strictly ascending".into()));
    }
    let config = SimulationConfig { stop_on_pandemic: true, record_series: false, ..*config };
    let jobs: Vec<(usize, usize)> = (0..seeds.len()).flat_map(|s| (0..beta_grid.len()).map(move |b| (s, b))).collect();
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(s, b)| {
            let d = DiseaseModel { beta: beta_grid[b], ..*disease };
            let e = run_ensemble(world, &d, seeds[s], runs, &config, base_seed)?;
            Ok(SweepCell {
                beta: beta_grid[b],
                pandemic: e.is_pandemic(),
                pandemic_runs: e.pandemic_runs(),
                median_pandemic_day: e.median_pandemic_day,
            })
        })
        .collect::<Result<_, ExperimentError>>()?;

    let rows: Vec<SweepRow> = seeds
        .iter()
        .zip(cells.chunks(beta_grid.len()))
        .map(|(&seed, cells)| SweepRow {
            seed,
            iata: world.iata(seed).to_string(),
            aef: aef[seed],
            minimal_beta: cells.iter().find(|c| c.pandemic).map(|c| c.beta),
            cells: cells.to_vec(),
        })
        .collect();
    let never_pandemic = rows.iter().filter(|r| r.minimal_beta.is_none()).map(|r| r.iata.clone()).collect();
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| r.minimal_beta.map(|b| (r.aef, b))).unzip();
    Ok(SweepReport {
        experiment: "sweep-beta",
        rng_seed: base_seed,
        runs,
        beta_grid: beta_grid.to_vec(),
        aef_vs_minimal_beta: CorrelationCell::compute(&x, &y),
        rows,
        never_pandemic,
    })
}
