// SPDX-License-Identifier: Apache-2.0

//! Airport Expected Force.
//!
//! Starting from a single infected seed in an otherwise susceptible weighted
//! network, enumerate every ordered way the first two transmissions can
//! happen. The first transmission follows edge `seed -> a` with probability
//! proportional to its weight. The second follows any edge leaving the
//! infected pair `{seed, a}`, again proportional to weight. Each pattern ends
//! in a three-node infected cluster whose force of infection is the total
//! weight of edges between the cluster and the rest of the graph.
//!
//! With `d_j = foi_j * p_j` normalised to a distribution, the expected force
//! is its entropy `-sum d_j ln d_j`. Scores are then min-max scaled to
//! `[0, 100]` across the network.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wan::{NodeId, WanGraph};

#[derive(Debug, Error, PartialEq)]
pub enum ExfError {
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("seed {0} has no edges")]
    IsolatedSeed(String),
}

/// One ordered realisation of the first two transmissions from a seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionPattern {
    /// Target of the first transmission.
    pub first_target: NodeId,
    /// Infected endpoint of the second transmission (the seed or `first_target`).
    pub second_source: NodeId,
    /// Newly infected node of the second transmission.
    pub second_target: NodeId,
    pub probability: f64,
    /// Weight of edges between `{seed, first_target, second_target}` and the
    /// rest of the graph.
    pub cluster_foi: f64,
}

/// Raw expected force of one seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AefValue {
    pub raw: f64,
    /// Set when no pattern carries any force of infection (isolated dyads,
    /// tiny closed components). `raw` is 0 in that case.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AefScore {
    pub raw_entropy: f64,
    /// Min-max scaled into `[0, 100]` over the whole network.
    pub normalized: f64,
    pub degenerate: bool,
}

/// Dense per-node weight rows, reused across seeds to keep enumeration O(1)
/// per pattern.
struct Scratch {
    from_seed: Vec<f64>,
    from_first: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { from_seed: vec![0.0; n], from_first: vec![0.0; n] }
    }
}

fn check_seed(graph: &WanGraph, seed: NodeId) -> Result<(), ExfError> {
    if !graph.contains(seed) {
        return Err(ExfError::UnknownNode(seed));
    }
    if graph.degree(seed) == 0 {
        return Err(ExfError::IsolatedSeed(graph.iata(seed).to_string()));
    }
    Ok(())
}

/// `gross - 2 * internal`, the weight leaving a cluster given its summed
/// strength and internal edge weight. Differences within rounding of `gross`
/// are exact zeros, so closed clusters stay closed under any weight scale.
fn outward_weight(gross: f64, internal: f64) -> f64 {
    let foi = gross - 2.0 * internal;
    if foi <= 1e-12 * gross {
        0.0
    } else {
        foi
    }
}

fn for_each_pattern<F: FnMut(TransmissionPattern)>(graph: &WanGraph, seed: NodeId, scratch: &mut Scratch, mut emit: F) {
    let s_strength = graph.strength(seed);
    for (b, w) in graph.neighbors(seed) {
        scratch.from_seed[b] = w;
    }
    for (a, w_sa) in graph.neighbors(seed) {
        let a_strength = graph.strength(a);
        let outward = (s_strength - w_sa) + (a_strength - w_sa);
        if outward <= 0.0 {
            continue;
        }
        let p_first = w_sa / s_strength;
        for (b, w) in graph.neighbors(a) {
            scratch.from_first[b] = w;
        }
        let pair_strength = s_strength + a_strength - 2.0 * w_sa;
        // Second transmission from the seed.
        for (b, w_sb) in graph.neighbors(seed) {
            if b == a {
                continue;
            }
            let foi = outward_weight(pair_strength + graph.strength(b), w_sb + scratch.from_first[b]);
            emit(TransmissionPattern {
                first_target: a,
                second_source: seed,
                second_target: b,
                probability: p_first * (w_sb / outward),
                cluster_foi: foi,
            });
        }
        // Second transmission from the first target.
        for (b, w_ab) in graph.neighbors(a) {
            if b == seed {
                continue;
            }
            let foi = outward_weight(pair_strength + graph.strength(b), w_ab + scratch.from_seed[b]);
            emit(TransmissionPattern {
                first_target: a,
                second_source: a,
                second_target: b,
                probability: p_first * (w_ab / outward),
                cluster_foi: foi,
            });
        }
        for &b in graph.neighbor_ids(a) {
            scratch.from_first[b] = 0.0;
        }
    }
    for &b in graph.neighbor_ids(seed) {
        scratch.from_seed[b] = 0.0;
    }
}

/// Every ordered two-transmission pattern from `seed`. Patterns that end in
/// the same cluster through different edges or orders are separate entries.
/// An isolated dyad yields no patterns.
pub fn enumerate_patterns(graph: &WanGraph, seed: NodeId) -> Result<Vec<TransmissionPattern>, ExfError> {
    check_seed(graph, seed)?;
    let mut scratch = Scratch::new(graph.node_count());
    let mut out = Vec::new();
    for_each_pattern(graph, seed, &mut scratch, |p| out.push(p));
    Ok(out)
}

/// Total weight of edges with exactly one endpoint in `cluster`.
pub fn cluster_foi(graph: &WanGraph, cluster: &[NodeId]) -> f64 {
    let mut inside = vec![false; graph.node_count()];
    for &c in cluster {
        inside[c] = true;
    }
    let mut total = 0.0;
    for (i, &c) in cluster.iter().enumerate() {
        if cluster[..i].contains(&c) {
            continue;
        }
        total += graph.neighbors(c).filter(|&(b, _)| !inside[b]).map(|(_, w)| w).sum::<f64>();
    }
    total
}

/// Shannon entropy (natural log) of `weights` normalised to sum 1. Zero
/// weights contribute nothing. Returns `None` when the total is not positive.
fn normalized_entropy(weights: &[f64]) -> Option<f64> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let h = weights
        .iter()
        .filter(|&&d| d > 0.0)
        .map(|&d| {
            let q = d / total;
            -q * q.ln()
        })
        .sum::<f64>();
    Some(h.max(0.0))
}

fn expected_force_with(graph: &WanGraph, seed: NodeId, scratch: &mut Scratch, buf: &mut Vec<f64>) -> AefValue {
    buf.clear();
    for_each_pattern(graph, seed, scratch, |p| buf.push(p.cluster_foi * p.probability));
    match normalized_entropy(buf) {
        Some(raw) => AefValue { raw, degenerate: false },
        None => AefValue { raw: 0.0, degenerate: true },
    }
}

/// Raw expected force (entropy in nats) of `seed`.
pub fn expected_force(graph: &WanGraph, seed: NodeId) -> Result<AefValue, ExfError> {
    check_seed(graph, seed)?;
    let mut scratch = Scratch::new(graph.node_count());
    let mut buf = Vec::new();
    Ok(expected_force_with(graph, seed, &mut scratch, &mut buf))
}

/// Min-max scale raw values into `[0, 100]`. A constant input maps to 0.
pub fn normalize_scores(raw: &[f64]) -> Vec<f64> {
    let (lo, hi) = raw.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if raw.is_empty() || hi <= lo {
        return vec![0.0; raw.len()];
    }
    raw.iter().map(|&x| (100.0 * ((x - lo) / (hi - lo))).clamp(0.0, 100.0)).collect()
}

/// Raw expected force of every node, indexed by node id. Seeds run in
/// parallel over a shared read-only graph.
pub fn all_raw_aef(graph: &WanGraph) -> Vec<AefValue> {
    let n = graph.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (Scratch::new(n), Vec::new()),
            |(scratch, buf), seed| expected_force_with(graph, seed, scratch, buf),
        )
        .collect()
}

/// Raw and normalised expected force of every node, indexed by node id.
pub fn all_aef(graph: &WanGraph) -> Vec<AefScore> {
    let raw = all_raw_aef(graph);
    let normalized = normalize_scores(&raw.iter().map(|v| v.raw).collect::<Vec<_>>());
    raw.iter()
        .zip(normalized)
        .map(|(v, normalized)| AefScore { raw_entropy: v.raw, normalized, degenerate: v.degenerate })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wan::graph::tests::airport;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WanGraph {
        let names: Vec<_> = (0..n).map(|i| airport(&format!("N{i:02}"), "X")).collect();
        WanGraph::from_edges(names, edges).unwrap()
    }

    fn k4() -> WanGraph {
        graph(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])
    }

    #[test]
    fn k4_patterns() {
        let p = enumerate_patterns(&k4(), 0).unwrap();
        assert_eq!(p.len(), 12);
        for x in &p {
            assert!((x.probability - 1.0 / 12.0).abs() < 1e-15);
            assert_eq!(x.cluster_foi, 3.0);
        }
        let v = expected_force(&k4(), 0).unwrap();
        assert!((v.raw - 12f64.ln()).abs() < 1e-12);
        assert!(!v.degenerate);
    }

    #[test]
    fn path_end_seed_is_a_point_mass() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let p = enumerate_patterns(&g, 0).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].probability, 1.0);
        assert_eq!(p[0].cluster_foi, 0.0);
        assert_eq!(expected_force(&g, 0).unwrap().raw, 0.0);
        // A longer path has outward weight but still one pattern.
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
        let v = expected_force(&g, 0).unwrap();
        assert_eq!(v, AefValue { raw: 0.0, degenerate: false });
    }

    #[test]
    fn star_center_patterns() {
        let g = graph(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]);
        let p = enumerate_patterns(&g, 0).unwrap();
        assert_eq!(p.len(), 6);
        for x in &p {
            assert!((x.probability - 1.0 / 6.0).abs() < 1e-15);
            assert_eq!(x.cluster_foi, 1.0);
        }
    }

    #[test]
    fn isolated_dyad_is_degenerate() {
        let g = graph(2, &[(0, 1, 5.0)]);
        assert!(enumerate_patterns(&g, 0).unwrap().is_empty());
        assert_eq!(expected_force(&g, 0).unwrap(), AefValue { raw: 0.0, degenerate: true });
        let all = all_aef(&g);
        assert!(all.iter().all(|s| s.degenerate && s.normalized == 0.0 && s.raw_entropy == 0.0));
    }

    #[test]
    fn unknown_seed() {
        assert_eq!(expected_force(&k4(), 9), Err(ExfError::UnknownNode(9)));
    }

    #[test]
    fn cluster_foi_cases() {
        let g = k4();
        assert_eq!(cluster_foi(&g, &[0, 1, 2, 3]), 0.0);
        assert_eq!(cluster_foi(&g, &[0, 1, 2]), 3.0);
        let g = graph(3, &[(0, 1, 2.5), (0, 2, 5.0)]);
        assert_eq!(cluster_foi(&g, &[0]), 7.5);
        assert_eq!(cluster_foi(&g, &[0, 0]), 7.5);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_scores(&[1.0, 2.0, 3.0]), vec![0.0, 50.0, 100.0]);
        assert_eq!(normalize_scores(&[4.2]), vec![0.0]);
        assert!(normalize_scores(&[]).is_empty());
    }

    #[test]
    fn k4_all_scores_zero() {
        let s = all_aef(&k4());
        assert_eq!(s.len(), 4);
        for x in s {
            assert!((x.raw_entropy - 12f64.ln()).abs() < 1e-12);
            assert_eq!(x.normalized, 0.0);
        }
    }
}
