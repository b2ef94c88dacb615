// SPDX-License-Identifier: Apache-2.0

use crate::wan::{NodeId, WanGraph};

/// Visit every `h` adjacent to both `i` and `j` (sorted-list merge). The
/// callback receives `h` and the weights `w(i, h)` and `w(j, h)`.
pub(crate) fn for_common_neighbors<F: FnMut(NodeId, f64, f64)>(graph: &WanGraph, i: NodeId, j: NodeId, mut f: F) {
    let (ni, wi) = (graph.neighbor_ids(i), graph.neighbor_weights(i));
    let (nj, wj) = (graph.neighbor_ids(j), graph.neighbor_weights(j));
    let (mut x, mut y) = (0, 0);
    while x < ni.len() && y < nj.len() {
        match ni[x].cmp(&nj[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                f(ni[x], wi[x], wj[y]);
                x += 1;
                y += 1;
            }
        }
    }
}

/// Local clustering coefficient.
///
/// Unweighted: closed neighbour pairs over `k (k - 1) / 2`. Weighted: the
/// Barrat et al. coefficient
/// `1 / (s_i (k_i - 1)) * sum_{j,h} (w_ij + w_ih) / 2 * a_ij a_ih a_jh`
/// over ordered neighbour pairs. Nodes of degree below 2 score 0.
pub fn clustering_coefficient(graph: &WanGraph, weighted: bool) -> Vec<f64> {
    (0..graph.node_count())
        .map(|i| {
            let k = graph.degree(i);
            if k < 2 {
                return 0.0;
            }
            // Each closed unordered pair {j, h} is seen twice, once from j
            // and once from h, matching the ordered-pair sums below.
            let mut closed = 0.0;
            for (j, w_ij) in graph.neighbors(i) {
                for_common_neighbors(graph, i, j, |_, w_ih, _| {
                    closed += if weighted { 0.5 * (w_ij + w_ih) } else { 1.0 };
                });
            }
            let k = k as f64;
            if weighted {
                closed / (graph.strength(i) * (k - 1.0))
            } else {
                closed / (k * (k - 1.0))
            }
        })
        .collect()
}
