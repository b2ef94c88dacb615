// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// How many units must exceed the prevalence threshold on the same day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PandemicCriterion {
    /// World regions.
    Regions(usize),
    /// Individual airports.
    Cities(usize),
}

/// A pandemic is declared on the first day the criterion holds at
/// `threshold_per_100k` infectious per 100,000 inhabitants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PandemicRule {
    pub threshold_per_100k: f64,
    pub criterion: PandemicCriterion,
}

impl Default for PandemicRule {
    fn default() -> Self {
        PandemicRule { threshold_per_100k: 1.0, criterion: PandemicCriterion::Regions(3) }
    }
}

/// Number of prevalences strictly above `threshold`.
pub fn units_over_threshold(prevalence: &[f64], threshold: f64) -> usize {
    prevalence.iter().filter(|&&p| p > threshold).count()
}

/// First day (numbered from 1) on which at least `min_units` entries of the
/// day's prevalence vector exceed `threshold`.
pub fn detect_pandemic<'a, I>(series: I, threshold: f64, min_units: usize) -> Option<u32>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    assert!(threshold > 0.0, "threshold must be positive");
    series
        .into_iter()
        .position(|day| units_over_threshold(day, threshold) >= min_units)
        .map(|i| i as u32 + 1)
}
