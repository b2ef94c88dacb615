// SPDX-License-Identifier: Apache-2.0

//! Small statistics toolbox used by the experiment reports.

mod swilk;

pub use swilk::{shapiro_wilk, ShapiroWilk};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {min} samples, got {n}")]
    TooFewSamples { n: usize, min: usize },
    #[error("need at most {max} samples, got {n}")]
    TooManySamples { n: usize, max: usize },
    #[error("zero variance, statistic undefined")]
    ZeroVariance,
    #[error("non-finite input")]
    NonFinite,
    #[error("confidence level {0} outside (0, 1)")]
    BadLevel(f64),
    #[error("empty input")]
    Empty,
}

/// Pearson correlation with a Fisher-z confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

impl CorrelationResult {
    /// Half the interval width, the `±` figure reported in correlation tables.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

pub(crate) fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Plain Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples { n: x.len(), min: 2 });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson r with a two-sided `level` interval from the Fisher transform:
/// `tanh(atanh(r) ± z_q / sqrt(n - 3))`, `q = (1 + level) / 2`.
pub fn pearson_ci(x: &[f64], y: &[f64], level: f64) -> Result<CorrelationResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 4 {
        return Err(StatsError::TooFewSamples { n: x.len(), min: 4 });
    }
    let r = pearson(x, y)?;
    fisher_interval(r, x.len(), level)
}

/// Fisher-z interval around a known `r` from `n` pairs.
pub fn fisher_interval(r: f64, n: usize, level: f64) -> Result<CorrelationResult, StatsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::BadLevel(level));
    }
    if n < 4 {
        return Err(StatsError::TooFewSamples { n, min: 4 });
    }
    if !r.is_finite() {
        return Err(StatsError::NonFinite);
    }
    let r = r.clamp(-1.0, 1.0);
    let z = r.atanh();
    let half = standard_normal().inverse_cdf(0.5 * (1.0 + level)) / ((n - 3) as f64).sqrt();
    Ok(CorrelationResult { r, ci_low: (z - half).tanh(), ci_high: (z + half).tanh(), n })
}

/// Average ranks (1-based), ties share the mean rank.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = 0.5 * ((i + 1) + (j + 1)) as f64;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    pearson(&ranks(x), &ranks(y))
}

/// Median; even lengths average the two middle values. `+inf` entries are
/// allowed and encode censored observations (no event), so a median of
/// `+inf` means the typical run had no event.
pub fn median(x: &[f64]) -> Result<f64, StatsError> {
    if x.is_empty() {
        return Err(StatsError::Empty);
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(StatsError::NonFinite);
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Lower median: the smaller of the two middle values for even lengths.
pub fn lower_median<T: Ord + Copy>(x: &[T]) -> Option<T> {
    if x.is_empty() {
        return None;
    }
    let mut v = x.to_vec();
    v.sort_unstable();
    Some(v[(v.len() - 1) / 2])
}

/// `|new - old| / |old|`; falls back to the absolute change `|new - old|`
/// when `old` is zero.
pub fn relative_change(old: f64, new: f64) -> f64 {
    if old == 0.0 {
        (new - old).abs()
    } else {
        (new - old).abs() / old.abs()
    }
}

/// Whether `new` departs from `old` by more than `threshold` (a fraction,
/// e.g. 0.01). Zero baselines compare the absolute change against the same
/// number in raw units.
pub fn changed_beyond(old: f64, new: f64, threshold: f64) -> bool {
    relative_change(old, new) > threshold
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn sample_std(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)).sqrt()
}
