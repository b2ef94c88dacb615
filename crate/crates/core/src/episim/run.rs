// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{units_over_threshold, DiseaseModel, PandemicCriterion, PandemicRule, SimError, World, REGION_COUNT};
use crate::rng::stream;
use crate::stats::lower_median;
use crate::wan::NodeId;

pub const DEFAULT_MAX_DAYS: u32 = 365;
pub const DEFAULT_RUNS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub max_days: u32,
    pub rule: PandemicRule,
    /// End the run as soon as the pandemic criterion is met.
    pub stop_on_pandemic: bool,
    /// Keep the daily regional prevalence series.
    pub record_series: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { max_days: DEFAULT_MAX_DAYS, rule: PandemicRule::default(), stop_on_pandemic: false, record_series: true }
    }
}

/// Result of one simulated epidemic. Series are indexed by `day - 1` and
/// end early once no latent or infectious individual is left.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationOutcome {
    /// Infectious per 100,000 inhabitants in each region, per day. Empty
    /// unless the configuration asked for it.
    pub regional_prevalence: Vec<[f64; REGION_COUNT]>,
    /// New infectious cases worldwide per day.
    pub global_incidence: Vec<u64>,
    pub pandemic_day: Option<u32>,
    /// Day of highest global incidence; 0 if no case ever became infectious.
    pub peak_day: u32,
    pub days: u32,
}

impl SimulationOutcome {
    /// Re-evaluate the regional criterion on the recorded series.
    pub fn pandemic_day_at(&self, threshold_per_100k: f64, min_regions: usize) -> Option<u32> {
        super::detect_pandemic(self.regional_prevalence.iter().map(|d| &d[..]), threshold_per_100k, min_regions)
    }
}

fn prevalence(infectious: u64, population: u64) -> f64 {
    if population == 0 {
        0.0
    } else {
        infectious as f64 / population as f64 * 1e5
    }
}

/// Run one epidemic from an already seeded `world`.
pub fn simulate<G: Rng + ?Sized>(
    world: &World,
    disease: &DiseaseModel,
    config: &SimulationConfig,
    rng: &mut G,
) -> SimulationOutcome {
    let mut w = world.clone();
    let mut out = SimulationOutcome {
        regional_prevalence: Vec::new(),
        global_incidence: Vec::new(),
        pandemic_day: None,
        peak_day: 0,
        days: 0,
    };
    let threshold = config.rule.threshold_per_100k;
    for day in 1..=config.max_days {
        let stats = w.step_day(disease, rng);
        out.global_incidence.push(stats.new_infectious);
        out.days = day;
        let (pop, inf) = w.regional_totals();
        let regional: [f64; REGION_COUNT] = std::array::from_fn(|r| prevalence(inf[r], pop[r]));
        if config.record_series {
            out.regional_prevalence.push(regional);
        }
        if out.pandemic_day.is_none() {
            let met = match config.rule.criterion {
                PandemicCriterion::Regions(m) => units_over_threshold(&regional, threshold) >= m,
                PandemicCriterion::Cities(m) => {
                    (0..w.airport_count())
                        .filter(|&k| {
                            let c = w.compartments(k);
                            prevalence(c.infectious(), c.total()) > threshold
                        })
                        .count()
                        >= m
                }
            };
            if met {
                out.pandemic_day = Some(day);
                if config.stop_on_pandemic {
                    break;
                }
            }
        }
        if !w.has_active_infection() {
            break;
        }
    }
    let mut best = 0;
    for (i, &x) in out.global_incidence.iter().enumerate() {
        if x > best {
            best = x;
            out.peak_day = i as u32 + 1;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub run: usize,
    pub pandemic_day: Option<u32>,
    pub peak_day: u32,
}

/// Per-run outcomes of an ensemble and their lower medians. A run without
/// a pandemic counts as an infinitely late one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnsembleSummary {
    pub seed: NodeId,
    pub seed_iata: String,
    pub runs: Vec<RunSummary>,
    pub median_pandemic_day: Option<u32>,
    pub median_peak_day: u32,
}

impl EnsembleSummary {
    pub fn is_pandemic(&self) -> bool {
        self.median_pandemic_day.is_some()
    }

    pub fn pandemic_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.pandemic_day.is_some()).count()
    }
}

/// Seed `world` at `seed` and run `runs` independent epidemics. Run `i`
/// draws from the stream `(base_seed, "ensemble", [seed, i])`, so results
/// do not depend on scheduling.
pub fn run_ensemble(
    world: &World,
    disease: &DiseaseModel,
    seed: NodeId,
    runs: usize,
    config: &SimulationConfig,
    base_seed: u64,
) -> Result<EnsembleSummary, SimError> {
    disease.validate()?;
    if runs == 0 {
        return Err(SimError::NoRuns);
    }
    let seeded = world.seed_outbreak(seed, disease)?;
    let config = SimulationConfig { record_series: false, ..*config };
    let summaries: Vec<RunSummary> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = stream(base_seed, "ensemble", &[seed as u64, run as u64]);
            let o = simulate(&seeded, disease, &config, &mut rng);
            RunSummary { run, pandemic_day: o.pandemic_day, peak_day: o.peak_day }
        })
        .collect();
    let days: Vec<u32> = summaries.iter().map(|r| r.pandemic_day.unwrap_or(u32::MAX)).collect();
    let peaks: Vec<u32> = summaries.iter().map(|r| r.peak_day).collect();
    let median_pandemic_day = lower_median(&days).filter(|&d| d != u32::MAX);
    Ok(EnsembleSummary {
        seed,
        seed_iata: world.iata(seed).to_string(),
        runs: summaries,
        median_pandemic_day,
        median_peak_day: lower_median(&peaks).expect("at least one run"),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::episim::{build_world, RegionTable};
    use crate::wan::graph::tests::airport;
    use crate::wan::WanGraph;

    fn line_world(rho: f64) -> World {
        let countries = ["France", "Japan", "Brazil", "Kenya", "Australia"];
        let airports = countries.iter().enumerate().map(|(i, c)| airport(&format!("A{i}X"), c)).collect();
        let g = WanGraph::from_edges(airports, &[(0, 1, 500.0), (1, 2, 500.0), (2, 3, 500.0), (3, 4, 500.0)]).unwrap();
        let pops: HashMap<String, u64> = (0..5).map(|i| (format!("A{i}X"), 100_000)).collect();
        build_world(&g, &pops, &RegionTable::bundled(), rho).unwrap()
    }

    #[test]
    fn isolated_airports_stay_susceptible() {
        let world = line_world(0.0);
        let seeded = world.seed_outbreak(2, &DiseaseModel::full(0.9)).unwrap();
        let mut rng = stream(5, "t", &[]);
        let out = simulate(&seeded, &DiseaseModel::full(0.9), &SimulationConfig::default(), &mut rng);
        assert!(out.days <= 365);
        assert!(out.peak_day >= 1);
        for k in [0, 1, 3, 4] {
            assert_eq!(seeded.compartments(k).s, 100_000);
        }
        assert_eq!(out.pandemic_day, None);
    }

    #[test]
    fn supercritical_spread_reaches_pandemic() {
        let world = line_world(0.7);
        let d = DiseaseModel::simple_seir(0.9);
        let mut rng = stream(6, "t", &[]);
        let seeded = world.seed_outbreak(0, &d).unwrap();
        let out = simulate(&seeded, &d, &SimulationConfig::default(), &mut rng);
        let day = out.pandemic_day.expect("pandemic");
        assert_eq!(out.pandemic_day_at(1.0, 3), Some(day));
        assert_eq!(out.regional_prevalence.len(), out.days as usize);
        // Cities criterion with all five cities.
        let rule = PandemicRule { criterion: PandemicCriterion::Cities(5), ..Default::default() };
        let cfg = SimulationConfig { rule, stop_on_pandemic: true, ..Default::default() };
        let out = simulate(&seeded, &d, &cfg, &mut stream(6, "t", &[]));
        assert_eq!(out.days, out.pandemic_day.unwrap());
    }

    #[test]
    fn ensemble_is_deterministic_and_uses_lower_median() {
        let world = line_world(0.7);
        let d = DiseaseModel::simple_seir(0.9);
        let cfg = SimulationConfig::default();
        let a = run_ensemble(&world, &d, 0, 6, &cfg, 11).unwrap();
        let b = run_ensemble(&world, &d, 0, 6, &cfg, 11).unwrap();
        assert_eq!(a, b);
        let mut peaks: Vec<u32> = a.runs.iter().map(|r| r.peak_day).collect();
        peaks.sort_unstable();
        assert_eq!(a.median_peak_day, peaks[2]);
        assert!(matches!(run_ensemble(&world, &d, 0, 0, &cfg, 11), Err(SimError::NoRuns)));
    }

    #[test]
    fn subcritical_run_has_no_pandemic() {
        let world = line_world(0.7);
        let d = DiseaseModel::simple_seir(0.05);
        let s = run_ensemble(&world, &d, 0, 1, &SimulationConfig::default(), 3).unwrap();
        assert_eq!(s.median_pandemic_day, None);
        assert!(!s.is_pandemic());
    }
}
