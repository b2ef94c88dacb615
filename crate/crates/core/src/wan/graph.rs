// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{resolve_route_weight, AirportRecord, AirportTable, RouteRecord, SeatTable, WanError};

/// Dense node index. Nodes are ordered by IATA code.
pub type NodeId = usize;

/// Immutable undirected seat-weighted airport graph.
///
/// Adjacency is stored in compressed rows with neighbours sorted by node
/// id, so weight lookups are a binary search and triangle enumeration can
/// merge sorted lists.
#[derive(Debug, Clone)]
pub struct WanGraph {
    airports: Vec<AirportRecord>,
    index: HashMap<String, NodeId>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    strength: Vec<f64>,
    by_country: BTreeMap<String, Vec<NodeId>>,
}

impl WanGraph {
    /// Build a graph from airports and `(a, b, weight)` edges given as
    /// indices into `airports`. Repeated pairs are summed in either
    /// direction. Airports without edges are dropped and nodes are
    /// renumbered in IATA order.
    pub fn from_edges(airports: Vec<AirportRecord>, edges: &[(usize, usize, f64)]) -> Result<Self, WanError> {
        let mut pair_weight: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(a, b, w) in edges {
            if a >= airports.len() {
                return Err(WanError::UnknownNode(a));
            }
            if b >= airports.len() {
                return Err(WanError::UnknownNode(b));
            }
            if a == b {
                return Err(WanError::SelfLoop(airports[a].iata.clone()));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(WanError::BadWeight {
                    a: airports[a].iata.clone(),
                    b: airports[b].iata.clone(),
                    weight: w,
                });
            }
            *pair_weight.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
        }
        if pair_weight.is_empty() {
            return Err(WanError::EmptyGraph);
        }

        let mut used = vec![false; airports.len()];
        for &(a, b) in pair_weight.keys() {
            used[a] = true;
            used[b] = true;
        }
        let mut kept: Vec<usize> = (0..airports.len()).filter(|&i| used[i]).collect();
        kept.sort_by(|&x, &y| airports[x].iata.cmp(&airports[y].iata));
        let mut remap = vec![usize::MAX; airports.len()];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }

        let n = kept.len();
        let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in &pair_weight {
            let (u, v) = (remap[a], remap[b]);
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * pair_weight.len());
        let mut weights = Vec::with_capacity(2 * pair_weight.len());
        let mut strength = Vec::with_capacity(n);
        offsets.push(0);
        for row in &mut adjacency {
            row.sort_by_key(|&(v, _)| v);
            strength.push(row.iter().map(|&(_, w)| w).sum());
            for &(v, w) in row.iter() {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }

        let mut slots: Vec<Option<AirportRecord>> = airports.into_iter().map(Some).collect();
        let airports: Vec<AirportRecord> = kept.iter().map(|&old| slots[old].take().expect("kept once")).collect();
        let index = airports.iter().enumerate().map(|(i, a)| (a.iata.clone(), i)).collect();
        let mut by_country: BTreeMap<String, Vec<NodeId>> = BTreeMap::new();
        for (i, a) in airports.iter().enumerate() {
            by_country.entry(a.country.clone()).or_default().push(i);
        }

        Ok(WanGraph { airports, index, offsets, targets, weights, strength, by_country })
    }

    pub fn node_count(&self) -> usize {
        self.airports.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn airport(&self, node: NodeId) -> &AirportRecord {
        &self.airports[node]
    }

    pub fn airports(&self) -> &[AirportRecord] {
        &self.airports
    }

    pub fn iata(&self, node: NodeId) -> &str {
        &self.airports[node].iata
    }

    pub fn node_id(&self, iata: &str) -> Option<NodeId> {
        self.index.get(iata).copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node < self.airports.len()
    }

    /// Neighbour ids of `node`, ascending.
    pub fn neighbor_ids(&self, node: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Edge weights aligned with [`neighbor_ids`](Self::neighbor_ids).
    pub fn neighbor_weights(&self, node: NodeId) -> &[f64] {
        &self.weights[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn neighbors(&self, node: NodeId) -> impl ExactSizeIterator<Item = (NodeId, f64)> + '_ {
        self.neighbor_ids(node).iter().copied().zip(self.neighbor_weights(node).iter().copied())
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Weighted degree: total seat weight incident to `node`.
    pub fn strength(&self, node: NodeId) -> f64 {
        self.strength[node]
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let ids = self.neighbor_ids(a);
        ids.binary_search(&b).ok().map(|i| self.neighbor_weights(a)[i])
    }

    /// Every edge once, as `(a, b, weight)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count()).flat_map(move |a| self.neighbors(a).filter(move |&(b, _)| a < b).map(move |(b, w)| (a, b, w)))
    }

    pub fn countries(&self) -> impl Iterator<Item = &str> {
        self.by_country.keys().map(String::as_str)
    }

    /// Nodes whose airport record has exactly this country.
    pub fn nodes_in_country(&self, country: &str) -> &[NodeId] {
        self.by_country.get(country).map(Vec::as_slice).unwrap_or(&[])
    }

    /// New graph without the flagged nodes. Airports left without any edge
    /// are dropped as well.
    pub fn without_nodes(&self, removed: &[bool]) -> Result<WanGraph, WanError> {
        assert_eq!(removed.len(), self.node_count());
        let edges: Vec<(usize, usize, f64)> =
            self.edges().filter(|&(a, b, _)| !removed[a] && !removed[b]).collect();
        WanGraph::from_edges(self.airports.clone(), &edges)
    }
}

/// Counts reported by [`build_network_report`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BuildSummary {
    pub airports_in: usize,
    pub routes_in: usize,
    pub nodes: usize,
    pub edges: usize,
    /// Airports dropped because no retained route touches them.
    pub isolated_airports: usize,
    /// Occurrences of equipment codes missing from the seat table.
    pub unknown_aircraft: BTreeMap<String, usize>,
    pub routes_without_equipment: usize,
    pub total_seats: f64,
}

/// Collapse routes into the undirected seat-weighted graph.
pub fn build_network(airports: &AirportTable, routes: &[RouteRecord], seats: &SeatTable) -> Result<WanGraph, WanError> {
    build_network_report(airports, routes, seats).map(|(g, _)| g)
}

pub fn build_network_report(
    airports: &AirportTable,
    routes: &[RouteRecord],
    seats: &SeatTable,
) -> Result<(WanGraph, BuildSummary), WanError> {
    let position: HashMap<&str, usize> =
        airports.records.iter().enumerate().map(|(i, a)| (a.iata.as_str(), i)).collect();
    let mut summary = BuildSummary { airports_in: airports.len(), routes_in: routes.len(), ..Default::default() };
    let mut edges = Vec::with_capacity(routes.len());
    for r in routes {
        let (Some(&a), Some(&b)) = (position.get(r.source.as_str()), position.get(r.destination.as_str())) else {
            return Err(WanError::Bundle(format!("route {}-{} references unknown airport", r.source, r.destination)));
        };
        if r.aircraft.is_empty() {
            summary.routes_without_equipment += 1;
        }
        for code in &r.aircraft {
            if seats.get(code).is_none() {
                *summary.unknown_aircraft.entry(code.clone()).or_insert(0) += 1;
            }
        }
        edges.push((a, b, resolve_route_weight(r, seats)));
    }
    let graph = WanGraph::from_edges(airports.records.clone(), &edges)?;
    summary.nodes = graph.node_count();
    summary.edges = graph.edge_count();
    summary.isolated_airports = airports.len() - graph.node_count();
    summary.total_seats = graph.edges().map(|(_, _, w)| w).sum();
    if !summary.unknown_aircraft.is_empty() {
        log::warn!(
            "{} equipment codes missing from seat table, counted at {} seats",
            summary.unknown_aircraft.len(),
            seats.default_capacity()
        );
    }
    Ok((graph, summary))
}
