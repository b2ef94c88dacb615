// SPDX-License-Identifier: Apache-2.0

//! World Airline Network model.
//!
//! Airports and routes come from OpenFlights-style CSV dumps. Every route
//! contributes the seat capacity of its listed equipment; all routes between
//! an unordered airport pair collapse into one undirected edge whose weight
//! is the summed capacity.

mod degrade;
mod export;
pub(crate) mod graph;
mod parse;
mod seats;

pub use degrade::{degrade_network, Degradation, RemovalScheme};
pub use export::{read_bundle, write_bundle, write_edge_list, EdgeRecord, GraphBundle, BUNDLE_FORMAT, BUNDLE_VERSION};
pub use graph::{build_network, build_network_report, BuildSummary, NodeId, WanGraph};
pub use parse::{parse_airports, parse_routes, AirportRecord, AirportTable, Diagnostic, RouteRecord, RouteTable};
pub use seats::{resolve_route_weight, SeatTable, DEFAULT_SEAT_CAPACITY};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WanError {
    #[error("no usable airport records ({skipped} placeholder lines, {malformed} malformed lines)")]
    NoAirports { skipped: usize, malformed: usize },
    #[error("seat table line {line}: {message}")]
    SeatTable { line: usize, message: String },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("self-loop on airport {0}")]
    SelfLoop(String),
    #[error("edge {a}-{b} has non-positive or non-finite weight {weight}")]
    BadWeight { a: String, b: String, weight: f64 },
    #[error("node index {0} out of range")]
    UnknownNode(usize),
    #[error("removal fraction {0} outside [0, 1)")]
    BadFraction(f64),
    #[error("cannot remove {wanted} airports from a subset of {available}")]
    SubsetTooSmall { wanted: usize, available: usize },
    #[error("AEF-weighted removal needs one score per node ({expected}), got {got}")]
    MissingScores { expected: usize, got: usize },
    #[error("graph bundle: {0}")]
    Bundle(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
