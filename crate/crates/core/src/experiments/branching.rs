// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::Serialize;

use crate::episim::{reed_frost_fixed_point, reed_frost_simulate, DEFAULT_MAJOR_THRESHOLD};
use crate::rng::stream;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchingPoint {
    pub r0: f64,
    /// `1 - x` for the smallest root `x` of `x = exp(-r0 (1 - x))`.
    pub analytic: f64,
    /// Observed major-outbreak fractions, one per batch of trials.
    pub dots: Vec<f64>,
}

/// `1.0, 1.1, ..., 3.0`.
pub fn default_r0_grid() -> Vec<f64> {
    (10..=30).map(|i| f64::from(i) / 10.0).collect()
}

/// For every `r0`, the analytic major-outbreak probability and `dots`
/// empirical fractions, each from `trials_per_dot` Reed-Frost outbreaks.
pub fn branching_figure(
    r0_grid: &[f64],
    population: u64,
    dots: usize,
    trials_per_dot: usize,
    base_seed: u64,
) -> Vec<BranchingPoint> {
    r0_grid
        .iter()
        .enumerate()
        .map(|(i, &r0)| {
            let dots = (0..dots)
                .into_par_iter()
                .map(|d| {
                    let mut rng = stream(base_seed, "branching", &[i as u64, d as u64]);
                    reed_frost_simulate(r0, population, trials_per_dot, DEFAULT_MAJOR_THRESHOLD, &mut rng)
                })
                .collect();
            let analytic = if r0 > 0.0 { 1.0 - reed_frost_fixed_point(r0) } else { 0.0 };
            BranchingPoint { r0, analytic, dots }
        })
        .collect()
}
