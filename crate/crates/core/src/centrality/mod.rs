// SPDX-License-Identifier: Apache-2.0

//! Comparison centralities: degree, eigenvector, betweenness, clustering
//! and triangle-peeling t-core, each in unweighted and weighted form where
//! that makes sense.

mod betweenness;
mod clustering;
mod eigen;
mod tcore;

pub use betweenness::betweenness_centrality;
pub use clustering::clustering_coefficient;
pub use eigen::{eigenvector_centrality, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use tcore::t_core;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wan::{NodeId, WanGraph};

#[derive(Debug, Error, PartialEq)]
pub enum CentralityError {
    #[error("power iteration did not converge after {iterations} iterations (last change {delta:e})")]
    NoConvergence { iterations: usize, delta: f64 },
    #[error("edge {0}-{1} has non-positive weight")]
    NonPositiveWeight(NodeId, NodeId),
}

/// Column names used in CSV output, in report order.
pub const MEASURE_COLUMNS: [&str; 9] = [
    "degree",
    "w_degree",
    "eigen",
    "w_eigen",
    "betweenness",
    "w_betweenness",
    "clustering",
    "w_clustering",
    "t_core",
];

/// All comparison measures, each indexed by node id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityReport {
    pub degree: Vec<usize>,
    pub weighted_degree: Vec<f64>,
    pub eigenvector: Vec<f64>,
    pub weighted_eigenvector: Vec<f64>,
    pub betweenness: Vec<f64>,
    pub weighted_betweenness: Vec<f64>,
    pub clustering: Vec<f64>,
    pub weighted_clustering: Vec<f64>,
    pub t_core: Vec<usize>,
}

impl CentralityReport {
    pub fn compute(graph: &WanGraph) -> Result<Self, CentralityError> {
        let (degree, weighted_degree) = degree_centralities(graph);
        Ok(CentralityReport {
            degree,
            weighted_degree,
            eigenvector: eigenvector_centrality(graph, false, DEFAULT_TOL, DEFAULT_MAX_ITER)?,
            weighted_eigenvector: eigenvector_centrality(graph, true, DEFAULT_TOL, DEFAULT_MAX_ITER)?,
            betweenness: betweenness_centrality(graph, false)?,
            weighted_betweenness: betweenness_centrality(graph, true)?,
            clustering: clustering_coefficient(graph, false),
            weighted_clustering: clustering_coefficient(graph, true),
            t_core: t_core(graph),
        })
    }

    /// The nine measures of `node` in [`MEASURE_COLUMNS`] order.
    pub fn row(&self, node: NodeId) -> [f64; 9] {
        [
            self.degree[node] as f64,
            self.weighted_degree[node],
            self.eigenvector[node],
            self.weighted_eigenvector[node],
            self.betweenness[node],
            self.weighted_betweenness[node],
            self.clustering[node],
            self.weighted_clustering[node],
            self.t_core[node] as f64,
        ]
    }

    /// One measure as a float column, by [`MEASURE_COLUMNS`] name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = MEASURE_COLUMNS.iter().position(|c| *c == name)?;
        Some((0..self.degree.len()).map(|n| self.row(n)[idx]).collect())
    }
}

/// `(degree, weighted degree)` per node.
pub fn degree_centralities(graph: &WanGraph) -> (Vec<usize>, Vec<f64>) {
    (0..graph.node_count()).map(|n| (graph.degree(n), graph.strength(n))).unzip()
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use crate::wan::graph::tests::airport;
    use crate::wan::WanGraph;

    pub fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WanGraph {
        let names: Vec<_> = (0..n).map(|i| airport(&format!("N{i:02}"), "X")).collect();
        WanGraph::from_edges(names, edges).unwrap()
    }

    pub fn k4() -> WanGraph {
        graph(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])
    }

    pub fn star(leaves: usize, w: f64) -> WanGraph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l, w)).collect();
        graph(leaves + 1, &edges)
    }
}
