// SPDX-License-Identifier: Apache-2.0

use super::clustering::for_common_neighbors;
use crate::wan::{NodeId, WanGraph};

fn triangle_counts(graph: &WanGraph) -> Vec<usize> {
    let mut count = vec![0usize; graph.node_count()];
    for v in 0..graph.node_count() {
        for &j in graph.neighbor_ids(v).iter().filter(|&&j| j > v) {
            for_common_neighbors(graph, v, j, |h, _, _| {
                if h > j {
                    count[v] += 1;
                    count[j] += 1;
                    count[h] += 1;
                }
            });
        }
    }
    count
}

/// Triangle core number of every node.
///
/// The t-core at level `t` is the maximal subgraph in which every node takes
/// part in at least `t` triangles of that subgraph; a node's number is the
/// largest `t` whose core contains it. Peeling removes every node at or
/// below the current level simultaneously, then recounts triangles among the
/// survivors, so the result does not depend on removal order.
pub fn t_core(graph: &WanGraph) -> Vec<usize> {
    let n = graph.node_count();
    let mut count = triangle_counts(graph);
    let mut alive = vec![true; n];
    let mut in_batch = vec![false; n];
    let mut core = vec![0usize; n];
    let mut remaining = n;
    let mut level = 0usize;
    let mut batch: Vec<NodeId> = Vec::new();

    while remaining > 0 {
        let min_alive = (0..n).filter(|&v| alive[v]).map(|v| count[v]).min().expect("nodes remain");
        level = level.max(min_alive);
        loop {
            batch.clear();
            batch.extend((0..n).filter(|&v| alive[v] && count[v] <= level));
            if batch.is_empty() {
                break;
            }
            for &v in &batch {
                core[v] = level;
                in_batch[v] = true;
            }
            for &v in &batch {
                for &j in graph.neighbor_ids(v) {
                    if !alive[j] {
                        continue;
                    }
                    for_common_neighbors(graph, v, j, |h, _, _| {
                        if h <= j || !alive[h] {
                            return;
                        }
                        // Credit each dying triangle once, from its smallest
                        // batch member.
                        if (in_batch[j] && j < v) || (in_batch[h] && h < v) {
                            return;
                        }
                        for u in [j, h] {
                            if !in_batch[u] {
                                count[u] -= 1;
                            }
                        }
                    });
                }
            }
            for &v in &batch {
                alive[v] = false;
                in_batch[v] = false;
            }
            remaining -= batch.len();
        }
    }
    core
}
