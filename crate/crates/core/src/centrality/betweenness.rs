// SPDX-License-Identifier: Apache-2.0

//! Exact Brandes betweenness. The weighted variant treats `1 / weight` as
//! the edge length, so heavier (more seats) edges are shorter.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use super::CentralityError;
use crate::wan::{NodeId, WanGraph};

/// Sources handled per parallel work item. Fixed so the reduction order,
/// and therefore every floating-point sum, is independent of thread count.
const SOURCE_CHUNK: usize = 64;

/// Relative tolerance under which two path lengths count as equal.
pub(crate) const LENGTH_TIE_TOL: f64 = 1e-10;

pub(crate) fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= LENGTH_TIE_TOL * a.abs().max(b.abs())
}

#[derive(Copy, Clone, PartialEq)]
struct Pending {
    dist: f64,
    node: NodeId,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Workspace {
    order: Vec<NodeId>,
    preds: Vec<Vec<NodeId>>,
    sigma: Vec<f64>,
    dist: Vec<f64>,
    delta: Vec<f64>,
    settled: Vec<bool>,
    queue: VecDeque<NodeId>,
    heap: BinaryHeap<Pending>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            order: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![f64::INFINITY; n],
            delta: vec![0.0; n],
            settled: vec![false; n],
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.preds[v].clear();
            self.sigma[v] = 0.0;
            self.dist[v] = f64::INFINITY;
            self.delta[v] = 0.0;
            self.settled[v] = false;
        }
        self.order.clear();
    }

    fn bfs(&mut self, graph: &WanGraph, s: NodeId) {
        self.sigma[s] = 1.0;
        self.dist[s] = 0.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1.0;
            for &w in graph.neighbor_ids(v) {
                if self.dist[w].is_infinite() {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn dijkstra(&mut self, graph: &WanGraph, s: NodeId) {
        self.sigma[s] = 1.0;
        self.dist[s] = 0.0;
        self.heap.push(Pending { dist: 0.0, node: s });
        while let Some(Pending { node: v, .. }) = self.heap.pop() {
            if self.settled[v] {
                continue;
            }
            self.settled[v] = true;
            self.order.push(v);
            for (w, weight) in graph.neighbors(v) {
                if self.settled[w] {
                    continue;
                }
                let candidate = self.dist[v] + 1.0 / weight;
                if self.dist[w].is_infinite() || (candidate < self.dist[w] && !same_length(candidate, self.dist[w])) {
                    self.dist[w] = candidate;
                    self.sigma[w] = self.sigma[v];
                    self.preds[w].clear();
                    self.preds[w].push(v);
                    self.heap.push(Pending { dist: candidate, node: w });
                } else if same_length(candidate, self.dist[w]) {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn accumulate(&mut self, s: NodeId, acc: &mut [f64]) {
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

/// Unnormalised betweenness of every node. Each unordered pair of endpoints
/// is counted once.
pub fn betweenness_centrality(graph: &WanGraph, weighted: bool) -> Result<Vec<f64>, CentralityError> {
    let n = graph.node_count();
    if weighted {
        if let Some((a, b, _)) = graph.edges().find(|&(_, _, w)| !(w > 0.0)) {
            return Err(CentralityError::NonPositiveWeight(a, b));
        }
    }
    let sources: Vec<NodeId> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                if weighted {
                    ws.dijkstra(graph, s);
                } else {
                    ws.bfs(graph, s);
                }
                ws.accumulate(s, &mut acc);
                ws.reset();
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    for t in &mut total {
        *t *= 0.5;
    }
    Ok(total)
}
