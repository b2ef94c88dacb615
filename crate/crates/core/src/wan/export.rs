// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{AirportRecord, WanError, WanGraph};

pub const BUNDLE_FORMAT: &str = "aef-wan-graph";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub src: String,
    pub dst: String,
    pub weight: f64,
}

/// Versioned JSON form of a [`WanGraph`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphBundle {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub nodes: Vec<AirportRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl GraphBundle {
    pub fn from_graph(graph: &WanGraph, metadata: BTreeMap<String, serde_json::Value>) -> Self {
        GraphBundle {
            format: BUNDLE_FORMAT.to_string(),
            version: BUNDLE_VERSION,
            metadata,
            nodes: graph.airports().to_vec(),
            edges: graph
                .edges()
                .map(|(a, b, w)| EdgeRecord { src: graph.iata(a).to_string(), dst: graph.iata(b).to_string(), weight: w })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WanGraph, WanError> {
        if self.format != BUNDLE_FORMAT {
            return Err(WanError::Bundle(format!("unexpected format {:?}", self.format)));
        }
        if self.version != BUNDLE_VERSION {
            return Err(WanError::Bundle(format!("unsupported version {}", self.version)));
        }
        let index: std::collections::HashMap<&str, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n.iata.as_str(), i)).collect();
        if index.len() != self.nodes.len() {
            return Err(WanError::Bundle("duplicate IATA code in nodes".into()));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let lookup = |code: &str| {
                index.get(code).copied().ok_or_else(|| WanError::Bundle(format!("edge references unknown airport {code}")))
            };
            edges.push((lookup(&e.src)?, lookup(&e.dst)?, e.weight));
        }
        WanGraph::from_edges(self.nodes.clone(), &edges)
    }
}

pub fn write_bundle<W: Write>(
    graph: &WanGraph,
    metadata: BTreeMap<String, serde_json::Value>,
    out: W,
) -> Result<(), WanError> {
    serde_json::to_writer_pretty(out, &GraphBundle::from_graph(graph, metadata))?;
    Ok(())
}

pub fn read_bundle<R: Read>(input: R) -> Result<(WanGraph, GraphBundle), WanError> {
    let bundle: GraphBundle = serde_json::from_reader(input)?;
    let graph = bundle.to_graph()?;
    Ok((graph, bundle))
}

/// Write `src_iata,dst_iata,weight`, one row per undirected edge.
pub fn write_edge_list<W: Write>(graph: &WanGraph, out: W) -> Result<(), WanError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["src_iata", "dst_iata", "weight"])?;
    for (a, b, weight) in graph.edges() {
        w.write_record([graph.iata(a), graph.iata(b), &weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wan::graph::tests::airport;

    fn triangle() -> WanGraph {
        let a = vec![airport("CCC", "X"), airport("AAA", "X"), airport("BBB", "Y")];
        WanGraph::from_edges(a, &[(0, 1, 2.5), (1, 2, 100.0), (2, 0, 7.0)]).unwrap()
    }

    #[test]
    fn bundle_round_trip() {
        let g = triangle();
        let mut meta = BTreeMap::new();
        meta.insert("source".to_string(), serde_json::json!("fixture"));
        let mut buf = Vec::new();
        write_bundle(&g, meta, &mut buf).unwrap();
        let (h, bundle) = read_bundle(buf.as_slice()).unwrap();
        assert_eq!(bundle.metadata["source"], "fixture");
        assert_eq!(h.airports(), g.airports());
        assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn bundle_rejects_wrong_version_and_unknown_nodes() {
        let mut b = GraphBundle::from_graph(&triangle(), BTreeMap::new());
        b.version = 99;
        assert!(b.to_graph().is_err());
        let mut b = GraphBundle::from_graph(&triangle(), BTreeMap::new());
        b.edges.push(EdgeRecord { src: "AAA".into(), dst: "QQQ".into(), weight: 1.0 });
        assert!(matches!(b.to_graph(), Err(WanError::Bundle(_))));
    }

    #[test]
    fn edge_list_csv() {
        let mut buf = Vec::new();
        write_edge_list(&triangle(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "src_iata,dst_iata,weight\nAAA,BBB,100\nAAA,CCC,2.5\nBBB,CCC,7\n"
        );
    }
}
