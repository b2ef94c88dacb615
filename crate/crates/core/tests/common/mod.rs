// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use aef::wan::AirportRecord;
use aef::WanGraph;
use proptest::prelude::*;

pub fn airport(iata: &str, country: &str) -> AirportRecord {
    AirportRecord {
        iata: iata.into(),
        icao: None,
        name: format!("{iata} field"),
        city: iata.into(),
        country: country.into(),
        latitude: 0.0,
        longitude: 0.0,
    }
}

/// Graph on nodes `N00, N01, ...`; node ids follow the numbering.
pub fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WanGraph {
    let airports = (0..n).map(|i| airport(&format!("N{i:02}"), "France")).collect();
    WanGraph::from_edges(airports, edges).unwrap()
}

/// Connected graphs on `2..=max_nodes` nodes with integer weights in
/// `1..=10`: a random spanning tree plus random extra edges.
pub fn connected_graph(max_nodes: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
    (2..=max_nodes).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
            proptest::collection::vec(any::<bool>(), pairs),
            proptest::collection::vec(1u32..=10, pairs),
        )
            .prop_map(|(n, parents, extra, weights)| {
                let mut present = vec![vec![false; n]; n];
                for (i, p) in parents.iter().enumerate() {
                    let child = i + 1;
                    let parent = p.index(child);
                    present[parent][child] = true;
                }
                let mut edges = Vec::new();
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if present[a][b] || extra[k] {
                            edges.push((a, b, f64::from(weights[k])));
                        }
                        k += 1;
                    }
                }
                (n, edges)
            })
    })
}

/// Weight of edges with exactly one endpoint in `set`.
fn boundary(edges: &[(usize, usize, f64)], set: &[usize]) -> f64 {
    edges.iter().filter(|(a, b, _)| set.contains(a) != set.contains(b)).map(|e| e.2).sum()
}

/// Raw expected force and degeneracy flag from first principles: walk
/// every ordered pair of transmission events on the edge list, with no
/// adjacency structure or incremental bookkeeping.
pub fn aef_brute_force(edges: &[(usize, usize, f64)], seed: usize) -> (f64, bool) {
    let mut d = Vec::new();
    let first_total = boundary(edges, &[seed]);
    for &(x, y, w1) in edges {
        let a = match (x == seed, y == seed) {
            (true, false) => y,
            (false, true) => x,
            _ => continue,
        };
        let pair = [seed, a];
        let second_total = boundary(edges, &pair);
        for &(u, v, w2) in edges {
            let b = match (pair.contains(&u), pair.contains(&v)) {
                (true, false) => v,
                (false, true) => u,
                _ => continue,
            };
            let p = (w1 / first_total) * (w2 / second_total);
            d.push(boundary(edges, &[seed, a, b]) * p);
        }
    }
    let total: f64 = d.iter().sum();
    if total == 0.0 {
        return (0.0, true);
    }
    let h = d.iter().map(|x| x / total).filter(|&q| q > 0.0).map(|q| -q * q.ln()).sum();
    (h, false)
}
