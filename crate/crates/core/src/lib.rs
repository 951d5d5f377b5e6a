//! Clustering simulator for mobile ad hoc networks.
//!
//! Nodes move under random waypoint mobility, drain energy by role and
//! traffic, and are grouped into clusters by one of five head-election
//! schemes: the probability-gated weighted scheme in [`clustering`], or the
//! lowest-id, highest-degree, WCA and greedy MWIS baselines in [`baselines`].
//! [`engine`] runs the tick loop and records per-tick metrics; [`sweep`] and
//! [`report`] turn multi-seed experiments into CSV files.
//!
//! ```
//! use paiwca::config::{Algorithm, ScenarioConfig};
//!
//! let cfg = ScenarioConfig {
//!     node_count: 20,
//!     sim_time: 10.0,
//!     algorithm: Algorithm::Paiwca,
//!     ..ScenarioConfig::default()
//! };
//! let out = paiwca::engine::run(&cfg).unwrap();
//! assert_eq!(out.series.len(), 10);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cli;
pub mod clustering;
pub mod config;
pub mod energy;
pub mod engine;
pub mod error;
pub mod mobility;
pub mod report;
pub mod sweep;
pub mod traffic;

pub use error::{Error, Result};
