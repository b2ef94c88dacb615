// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{check_scores, ExperimentError};
use crate::exf::all_raw_aef;
use crate::rng::stream;
use crate::stats::changed_beyond;
use crate::wan::{degrade_network, NodeId, RemovalScheme, WanGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Uniform,
    DegreeWeighted,
    AefWeighted,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Uniform, SchemeKind::DegreeWeighted, SchemeKind::AefWeighted];

    fn scheme<'a>(&self, raw: &'a [f64]) -> RemovalScheme<'a> {
        match self {
            SchemeKind::Uniform => RemovalScheme::Uniform,
            SchemeKind::DegreeWeighted => RemovalScheme::DegreeWeighted,
            SchemeKind::AefWeighted => RemovalScheme::AefWeighted(raw),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessConfig {
    pub fractions: Vec<f64>,
    pub schemes: Vec<SchemeKind>,
    pub repeats: usize,
    /// Country whose airports are removed.
    pub country: String,
    pub rng_seed: u64,
}

impl Default for RobustnessConfig {
    fn default() -> Self {
        RobustnessConfig {
            fractions: (1..=15).map(|p| f64::from(p) / 100.0).collect(),
            schemes: SchemeKind::ALL.to_vec(),
            repeats: 10,
            country: "United States".into(),
            rng_seed: 0,
        }
    }
}

/// Surviving airports of one group and how many moved, averaged over
/// repeats.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GroupChange {
    pub compared: f64,
    pub changed_over_1pct: f64,
    pub changed_over_5pct: f64,
}

impl GroupChange {
    pub fn share_over_1pct(&self) -> f64 {
        if self.compared == 0.0 {
            0.0
        } else {
            self.changed_over_1pct / self.compared
        }
    }

    pub fn share_over_5pct(&self) -> f64 {
        if self.compared == 0.0 {
            0.0
        } else {
            self.changed_over_5pct / self.compared
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessRow {
    pub fraction: f64,
    pub scheme: SchemeKind,
    /// Airports removed per repeat, sampled plus orphaned, averaged.
    pub removed: f64,
    /// Airports of the degraded country.
    pub inside: GroupChange,
    pub outside: GroupChange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub experiment: &'static str,
    pub config: RobustnessConfig,
    pub rows: Vec<RobustnessRow>,
}

/// Remove a share of one country's airports under each scheme, recompute
/// the raw expected force of every survivor and count how many moved by
/// more than 1% and 5% relative to `raw`, the undegraded values.
pub fn robustness_study(
    graph: &WanGraph,
    raw: &[f64],
    config: &RobustnessConfig,
) -> Result<RobustnessReport, ExperimentError> {
    check_scores(raw, graph.node_count())?;
    let subset: Vec<NodeId> = graph.nodes_in_country(&config.country).to_vec();
    let inside: HashSet<NodeId> = subset.iter().copied().collect();
    let mut rows = Vec::new();
    for (fi, &fraction) in config.fractions.iter().enumerate() {
        for &kind in &config.schemes {
            let mut row = RobustnessRow {
                fraction,
                scheme: kind,
                removed: 0.0,
                inside: GroupChange::default(),
                outside: GroupChange::default(),
            };
            for rep in 0..config.repeats {
                let mut rng = stream(config.rng_seed, "robustness", &[fi as u64, kind as u64, rep as u64]);
                let d = degrade_network(graph, &subset, fraction, kind.scheme(raw), &mut rng)?;
                row.removed += (d.removed.len() + d.orphaned.len()) as f64;
                let after = all_raw_aef(&d.graph);
                for (node, value) in after.iter().enumerate() {
                    let original = graph.node_id(d.graph.iata(node)).expect("survivors come from the input graph");
                    let group = if inside.contains(&original) { &mut row.inside } else { &mut row.outside };
                    group.compared += 1.0;
                    if changed_beyond(raw[original], value.raw, 0.01) {
                        group.changed_over_1pct += 1.0;
                    }
                    if changed_beyond(raw[original], value.raw, 0.05) {
                        group.changed_over_5pct += 1.0;
                    }
                }
            }
            let reps = config.repeats.max(1) as f64;
            row.removed /= reps;
            for g in [&mut row.inside, &mut row.outside] {
                g.compared /= reps;
                g.changed_over_1pct /= reps;
                g.changed_over_5pct /= reps;
            }
            rows.push(row);
        }
    }
    Ok(RobustnessReport { experiment: "robustness", config: config.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{synthetic_network, SyntheticParams};

    #[test]
    fn zero_fraction_changes_nothing() {
        let g = synthetic_network(&SyntheticParams { nodes: 80, ..SyntheticParams::desk() }, &mut stream(3, "g", &[])).unwrap();
        let raw: Vec<f64> = all_raw_aef(&g).iter().map(|v| v.raw).collect();
        let config = RobustnessConfig { fractions: vec![0.0, 0.15], repeats: 2, ..Default::default() };
        let r = robustness_study(&g, &raw, &config).unwrap();
        assert_eq!(r.rows.len(), 6);
        for row in &r.rows[..3] {
            assert_eq!(row.removed, 0.0);
            assert_eq!(row.inside.changed_over_1pct + row.outside.changed_over_1pct, 0.0);
            assert_eq!(row.inside.compared + row.outside.compared, 80.0);
        }
        for row in &r.rows[3..] {
            assert!(row.removed >= 1.0);
            assert!(row.outside.changed_over_5pct <= row.outside.changed_over_1pct);
        }
        let again = robustness_study(&g, &raw, &config).unwrap();
        assert_eq!(r, again);
    }
}
