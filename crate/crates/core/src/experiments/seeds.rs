// SPDX-License-Identifier: Apache-2.0

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use super::ExperimentError;
use crate::wan::NodeId;

const INTERVALS: usize = 10;

/// Seed airports chosen across the score range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedSelection {
    /// One airport per interval, in interval order.
    pub seeds: Vec<NodeId>,
    /// Interval each seed was actually drawn from.
    pub source_interval: Vec<usize>,
    /// One note per interval that had to borrow from a neighbour.
    pub notes: Vec<String>,
}

fn interval_of(score: f64) -> usize {
    ((score / 10.0).floor().max(0.0) as usize).min(INTERVALS - 1)
}

/// Split `[0, 100]` into ten equal intervals (the last one closed) and draw
/// one airport uniformly from each. An empty interval borrows an unused
/// airport from the nearest interval that still has one, the lower
/// interval winning ties.
pub fn select_decile_seeds<R: Rng + ?Sized>(scores: &[f64], rng: &mut R) -> Result<SeedSelection, ExperimentError> {
    if scores.len() < INTERVALS {
        return Err(ExperimentError::TooFewAirports { needed: INTERVALS, available: scores.len() });
    }
    let mut pools: Vec<Vec<NodeId>> = vec![Vec::new(); INTERVALS];
    for (node, &s) in scores.iter().enumerate() {
        pools[interval_of(s)].push(node);
    }
    let mut taken = vec![false; scores.len()];
    let mut seeds = vec![usize::MAX; INTERVALS];
    let mut source = vec![0; INTERVALS];
    let draw = |pool: &[NodeId], taken: &mut [bool], rng: &mut R| -> Option<NodeId> {
        let free: Vec<NodeId> = pool.iter().copied().filter(|&n| !taken[n]).collect();
        let pick = *free.choose(rng)?;
        taken[pick] = true;
        Some(pick)
    };
    for i in 0..INTERVALS {
        if let Some(pick) = draw(&pools[i], &mut taken, rng) {
            seeds[i] = pick;
            source[i] = i;
        }
    }
    let mut notes = Vec::new();
    for i in 0..INTERVALS {
        if seeds[i] != usize::MAX {
            continue;
        }
        let donor = (1..INTERVALS)
            .flat_map(|d| [i.checked_sub(d), Some(i + d)])
            .flatten()
            .filter(|&j| j < INTERVALS)
            .find(|&j| pools[j].iter().any(|&n| !taken[n]))
            .expect("at least ten airports in total");
        seeds[i] = draw(&pools[donor], &mut taken, rng).expect("donor has a free airport");
        source[i] = donor;
        notes.push(format!(
            "interval [{}, {}) is empty; filled from [{}, {})",
            10 * i,
            10 * (i + 1),
            10 * donor,
            10 * (donor + 1)
        ));
    }
    Ok(SeedSelection { seeds, source_interval: source, notes })
}

/// `count` airports whose scores evenly cover the observed range: targets
/// are spaced evenly over `[min, max]` and each takes the unused airport
/// with the nearest score, the lowest node id (lowest IATA code) winning
/// ties.
pub fn select_range_covering_seeds(scores: &[f64], count: usize) -> Result<Vec<NodeId>, ExperimentError> {
    if scores.len() < count {
        return Err(ExperimentError::TooFewAirports { needed: count, available: scores.len() });
    }
    let (lo, hi) = scores.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let mut taken = vec![false; scores.len()];
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let target = if count == 1 { lo } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 };
        let mut best: Option<(f64, NodeId)> = None;
        for (node, &s) in scores.iter().enumerate() {
            if taken[node] {
                continue;
            }
            let d = (s - target).abs();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, node));
            }
        }
        let (_, node) = best.expect("enough airports");
        taken[node] = true;
        out.push(node);
    }
    Ok(out)
}
