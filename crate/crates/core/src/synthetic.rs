// SPDX-License-Identifier: Apache-2.0

//! Synthetic airline-like networks.
//!
//! Growth by preferential attachment with a bias toward airports of the same
//! world region, and seat weights that grow with the product of endpoint
//! degrees, `w_ij ~ (k_i k_j)^theta`, as observed on the real network. Every
//! airport is placed in one country per world region so the result can be
//! simulated with the bundled region table.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::episim::REGION_COUNT;
use crate::wan::{AirportRecord, WanError, WanGraph};

/// One representative country per world region, in region-id order.
pub const REGION_COUNTRIES: [&str; REGION_COUNT] = [
    "United States",
    "Mexico",
    "Jamaica",
    "Colombia",
    "Brazil",
    "France",
    "Sweden",
    "Italy",
    "Poland",
    "Egypt",
    "Nigeria",
    "Kenya",
    "India",
    "China",
    "Thailand",
    "Australia",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticParams {
    pub nodes: usize,
    /// Edges brought by each newly attached airport.
    pub links_per_node: usize,
    /// Attachment bonus for targets in the newcomer's region.
    pub locality: f64,
    /// Seats on an edge between two degree-1 airports.
    pub weight_scale: f64,
    pub weight_exponent: f64,
    /// Multiplicative noise: weights are scaled by a uniform factor in
    /// `[1 - noise, 1 + noise]`.
    pub weight_noise: f64,
}

impl SyntheticParams {
    /// 200-airport network for desk-scale experiments.
    pub fn desk() -> Self {
        SyntheticParams { nodes: 200, links_per_node: 2, locality: 6.0, weight_scale: 150.0, weight_exponent: 0.5, weight_noise: 0.5 }
    }

    /// Roughly the size and density of the real network.
    pub fn wan_scale() -> Self {
        SyntheticParams { nodes: 3458, links_per_node: 6, locality: 6.0, weight_scale: 150.0, weight_exponent: 0.5, weight_noise: 0.5 }
    }
}

/// Three-letter code for airport number `i` (`AAA`, `AAB`, ...).
pub fn synthetic_code(i: usize) -> String {
    assert!(i < 26 * 26 * 26, "synthetic codes exhausted");
    let letter = |d: usize| char::from(b'A' + d as u8);
    [letter(i / 676), letter(i / 26 % 26), letter(i % 26)].iter().collect()
}

/// Grow a synthetic network. Node `i` of the result has IATA code
/// [`synthetic_code`]`(i)` because codes sort in creation order.
pub fn synthetic_network<R: Rng + ?Sized>(params: &SyntheticParams, rng: &mut R) -> Result<WanGraph, WanError> {
    let m = params.links_per_node.max(1);
    let n = params.nodes.max(m + 2);
    let region: Vec<usize> = (0..n).map(|i| if i < REGION_COUNT { i } else { rng.random_range(0..REGION_COUNT) }).collect();
    let mut degree = vec![0usize; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    // Seed clique on the first m + 1 airports.
    for a in 0..=m {
        for b in a + 1..=m {
            pairs.push((a, b));
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let mut chosen = Vec::with_capacity(m);
    let mut attraction = Vec::with_capacity(n);
    for v in m + 1..n {
        attraction.clear();
        attraction.extend((0..v).map(|u| {
            let bonus = if region[u] == region[v] { params.locality } else { 1.0 };
            degree[u] as f64 * bonus
        }));
        chosen.clear();
        while chosen.len() < m {
            let total: f64 = attraction.iter().sum();
            let mut x = rng.random::<f64>() * total;
            let mut pick = v - 1;
            for (u, &a) in attraction.iter().enumerate() {
                if x < a {
                    pick = u;
                    break;
                }
                x -= a;
            }
            if attraction[pick] == 0.0 {
                continue;
            }
            attraction[pick] = 0.0;
            chosen.push(pick);
        }
        for &u in &chosen {
            pairs.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }

    let edges: Vec<(usize, usize, f64)> = pairs
        .iter()
        .map(|&(a, b)| {
            let base = params.weight_scale * ((degree[a] * degree[b]) as f64).powf(params.weight_exponent);
            let noise = 1.0 + params.weight_noise * (2.0 * rng.random::<f64>() - 1.0);
            (a, b, (base * noise).round().max(1.0))
        })
        .collect();
    let airports = (0..n)
        .map(|i| {
            let iata = synthetic_code(i);
            AirportRecord {
                icao: None,
                name: format!("Synthetic {iata}"),
                city: iata.clone(),
                country: REGION_COUNTRIES[region[i]].to_string(),
                latitude: 0.0,
                longitude: 0.0,
                iata,
            }
        })
        .collect();
    WanGraph::from_edges(airports, &edges)
}

/// People per seat for desk-scale worlds. A 200-airport network gives each
/// airport about a hundred times the share of its region's traffic that a
/// small airport has on the full network, so prevalence thresholds are
/// crossed almost regardless of transmission rate unless the regions are
/// correspondingly more populous.
pub const DESK_PEOPLE_PER_SEAT: f64 = 1e6;

/// Populations proportional to weighted degree: `floor(strength * people_per_seat)`,
/// at least one.
pub fn scaled_populations(graph: &WanGraph, people_per_seat: f64) -> HashMap<String, u64> {
    (0..graph.node_count())
        .map(|v| (graph.iata(v).to_string(), ((graph.strength(v) * people_per_seat).floor() as u64).max(1)))
        .collect()
}
