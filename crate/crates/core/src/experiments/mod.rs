// SPDX-License-Identifier: Apache-2.0

//! End-to-end studies linking expected force to simulated epidemics: the
//! invasion-threshold sweep, the time-to-pandemic correlation study, network
//! degradation robustness, and the branching-process figure data.

mod branching;
mod robustness;
mod seeds;
mod sweep;
mod ttp;

pub use branching::{branching_figure, default_r0_grid, BranchingPoint};
pub use robustness::{robustness_study, GroupChange, RobustnessConfig, RobustnessReport, RobustnessRow, SchemeKind};
pub use seeds::{select_decile_seeds, select_range_covering_seeds, SeedSelection};
pub use sweep::{default_beta_grid, invasion_threshold_sweep, SweepCell, SweepReport, SweepRow};
pub use ttp::{time_to_pandemic_study, MeasureCorrelation, SeedOutcome, StudyMeasures, TimeToPandemicReport, STUDY_MEASURES};

use serde::Serialize;
use thiserror::Error;

use crate::centrality::CentralityError;
use crate::episim::SimError;
use crate::stats::{pearson_ci, StatsError};
use crate::wan::WanError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("need at least {needed} airports, have {available}")]
    TooFewAirports { needed: usize, available: usize },
    #[error("expected one score per airport ({expected}), got {got}")]
    ScoreLength { expected: usize, got: usize },
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("the invasion sweep needs plain SEIR (p_asym = 0, p_travel_sym = 1)")]
    NotSimpleSeir,
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Wan(#[from] WanError),
    #[error(transparent)]
    Centrality(#[from] CentralityError),
}

/// A Pearson correlation with its 95% interval, or the reason it is
/// undefined (too few points, zero variance).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationCell {
    pub n: usize,
    pub r: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub ci_half_width: Option<f64>,
    pub undefined: Option<String>,
}

impl CorrelationCell {
    pub fn compute(x: &[f64], y: &[f64]) -> Self {
        match pearson_ci(x, y, 0.95) {
            Ok(c) => CorrelationCell {
                n: c.n,
                r: Some(c.r),
                ci_low: Some(c.ci_low),
                ci_high: Some(c.ci_high),
                ci_half_width: Some(c.half_width()),
                undefined: None,
            },
            Err(e) => Self::undefined(x.len(), e),
        }
    }

    fn undefined(n: usize, e: StatsError) -> Self {
        CorrelationCell { n, r: None, ci_low: None, ci_high: None, ci_half_width: None, undefined: Some(e.to_string()) }
    }
}

fn check_scores(scores: &[f64], expected: usize) -> Result<(), ExperimentError> {
    if scores.len() == expected {
        Ok(())
    } else {
        Err(ExperimentError::ScoreLength { expected, got: scores.len() })
    }
}
