// SPDX-License-Identifier: Apache-2.0

//! Airport Expected Force (AEF) on a seat-weighted model of the World
//! Airline Network, a comparison suite of classic centralities, and a
//! chain-binomial metapopulation SEIR simulator used to check how well the
//! metric explains where outbreaks turn into pandemics.
//!
//! The crate is organised bottom-up:
//!
//! - [`wan`]: OpenFlights ingestion, seat-weighted graph construction,
//!   degradation and export.
//! - [`exf`]: exact two-transmission pattern enumeration and the expected
//!   force entropy.
//! - [`centrality`]: degree, eigenvector, betweenness, clustering, t-core.
//! - [`episim`]: metapopulation SEIR simulator, pandemic detection and the
//!   Reed-Frost chain binomial.
//! - [`experiments`]: invasion threshold sweep, time-to-pandemic study,
//!   robustness study and branching-process figure data.
//! - [`stats`]: Pearson with Fisher-z intervals, Shapiro-Wilk, medians.

pub mod centrality;
pub mod episim;
pub mod exf;
pub mod experiments;
pub mod rng;
pub mod stats;
pub mod synthetic;
pub mod wan;

pub use wan::{NodeId, WanGraph};
