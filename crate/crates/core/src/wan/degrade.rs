// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use super::{NodeId, WanError, WanGraph};

/// How removal candidates are weighted when sampling without replacement.
#[derive(Debug, Clone, Copy)]
pub enum RemovalScheme<'a> {
    Uniform,
    DegreeWeighted,
    /// Weighted by a per-node score (indexed by node id of the undegraded
    /// graph), typically the raw AEF.
    AefWeighted(&'a [f64]),
}

impl RemovalScheme<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            RemovalScheme::Uniform => "uniform",
            RemovalScheme::DegreeWeighted => "degree",
            RemovalScheme::AefWeighted(_) => "aef",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Degradation {
    pub graph: WanGraph,
    /// IATA codes of the sampled airports.
    pub removed: Vec<String>,
    /// Airports that lost every edge as a consequence and were dropped too.
    pub orphaned: Vec<String>,
}

/// Number of subset airports removed for `fraction`: `ceil(fraction * n)`.
pub(crate) fn removal_count(fraction: f64, subset_len: usize) -> usize {
    // Guard against 0.15 * 100 = 15.000000000000002.
    let raw = fraction * subset_len as f64;
    (raw - 1e-9 * raw.max(1.0)).ceil().max(0.0) as usize
}

/// Remove `ceil(fraction * |subset|)` airports of `subset` from `graph`,
/// sampled without replacement with probability proportional to the scheme
/// weight, together with their incident edges. Weights are computed on the
/// undegraded graph. The input graph is left untouched.
pub fn degrade_network<R: Rng + ?Sized>(
    graph: &WanGraph,
    subset: &[NodeId],
    fraction: f64,
    scheme: RemovalScheme<'_>,
    rng: &mut R,
) -> Result<Degradation, WanError> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(WanError::BadFraction(fraction));
    }
    if let Some(&bad) = subset.iter().find(|&&n| !graph.contains(n)) {
        return Err(WanError::UnknownNode(bad));
    }
    let wanted = removal_count(fraction, subset.len());
    if wanted > subset.len() {
        return Err(WanError::SubsetTooSmall { wanted, available: subset.len() });
    }
    if wanted == 0 {
        return Ok(Degradation { graph: graph.clone(), removed: Vec::new(), orphaned: Vec::new() });
    }
    let mut pool: Vec<(NodeId, f64)> = match scheme {
        RemovalScheme::Uniform => subset.iter().map(|&n| (n, 1.0)).collect(),
        RemovalScheme::DegreeWeighted => subset.iter().map(|&n| (n, graph.degree(n) as f64)).collect(),
        RemovalScheme::AefWeighted(scores) => {
            if scores.len() != graph.node_count() {
                return Err(WanError::MissingScores { expected: graph.node_count(), got: scores.len() });
            }
            subset.iter().map(|&n| (n, scores[n].max(0.0))).collect()
        }
    };

    let mut removed_mask = vec![false; graph.node_count()];
    let mut removed = Vec::with_capacity(wanted);
    for _ in 0..wanted {
        let total: f64 = pool.iter().map(|&(_, w)| w).sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = pool.len() - 1;
            for (i, &(_, w)) in pool.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            // Never land on a zero-weight tail entry through rounding.
            while pool[chosen].1 <= 0.0 {
                chosen -= 1;
            }
            chosen
        } else {
            rng.random_range(0..pool.len())
        };
        let (node, _) = pool.swap_remove(pick);
        removed_mask[node] = true;
        removed.push(graph.iata(node).to_string());
    }

    let degraded = graph.without_nodes(&removed_mask)?;
    let orphaned = (0..graph.node_count())
        .filter(|&n| !removed_mask[n] && degraded.node_id(graph.iata(n)).is_none())
        .map(|n| graph.iata(n).to_string())
        .collect();
    Ok(Degradation { graph: degraded, removed, orphaned })
}
