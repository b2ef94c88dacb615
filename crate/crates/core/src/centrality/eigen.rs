// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;

use super::CentralityError;
use crate::wan::{NodeId, WanGraph};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Nodes of the largest connected component; ties go to the component
/// holding the smallest node id.
pub(crate) fn largest_component(graph: &WanGraph) -> Vec<NodeId> {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut best: Vec<NodeId> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in graph.neighbor_ids(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best.sort_unstable();
    best
}

/// Eigenvector centrality on the largest connected component, scaled so the
/// maximum is 1. Nodes outside that component score 0.
///
/// Power iteration runs on `I + A / d_max`, which has the same leading
/// eigenvector as `A` but no eigenvalue of equal modulus on bipartite
/// components, so the iteration cannot oscillate. It stops once successive
/// max-normalised iterates differ by less than `tol` in max norm.
pub fn eigenvector_centrality(
    graph: &WanGraph,
    weighted: bool,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, CentralityError> {
    let n = graph.node_count();
    let comp = largest_component(graph);
    let mut out = vec![0.0; n];
    if comp.len() == 1 {
        out[comp[0]] = 1.0;
        return Ok(out);
    }
    let edge = |w: f64| if weighted { w } else { 1.0 };
    let scale = comp
        .iter()
        .map(|&v| graph.neighbor_weights(v).iter().map(|&w| edge(w)).sum::<f64>())
        .fold(0.0, f64::max);

    let mut x = vec![0.0; n];
    for &v in &comp {
        x[v] = 1.0;
    }
    let mut y = vec![0.0; n];
    let mut delta = f64::INFINITY;
    for _ in 0..max_iter {
        for &v in &comp {
            let ax: f64 = graph.neighbors(v).map(|(u, w)| edge(w) * x[u]).sum();
            y[v] = x[v] + ax / scale;
        }
        let top = comp.iter().map(|&v| y[v]).fold(0.0, f64::max);
        delta = 0.0;
        for &v in &comp {
            y[v] /= top;
            delta = f64::max(delta, (y[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut y);
        if delta < tol {
            for &v in &comp {
                out[v] = x[v];
            }
            return Ok(out);
        }
    }
    Err(CentralityError::NoConvergence { iterations: max_iter, delta })
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;

    #[test]
    fn k4_is_uniform() {
        for weighted in [false, true] {
            let v = eigenvector_centrality(&k4(), weighted, 1e-12, 10_000).unwrap();
            assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn three_path() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let v = eigenvector_centrality(&g, false, 1e-13, 100_000).unwrap();
        assert!((v[1] - 1.0).abs() < 1e-12);
        assert!((v[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((v[2] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn smaller_components_score_zero() {
        let g = graph(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 4, 1.0)]);
        let v = eigenvector_centrality(&g, false, 1e-12, 10_000).unwrap();
        assert_eq!(v[3], 0.0);
        assert_eq!(v[4], 0.0);
        assert!((v[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 5.0), (2, 3, 1.0), (0, 3, 2.0)]);
        let err = eigenvector_centrality(&g, true, 1e-15, 2).unwrap_err();
        assert!(matches!(err, CentralityError::NoConvergence { iterations: 2, .. }));
    }
}
