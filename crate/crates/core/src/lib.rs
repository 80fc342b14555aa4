//! Collective search on NK landscapes by networked agents that learn
//! socially (best member, conformity, random copying) or individually.
//!
//! - [`landscape`]: NK task environments and exhaustive oracles
//! - [`graph`]: network topologies, structural metrics, metric-driven rewiring
//! - [`strategy`]: sampling and decision rules, hill climbing
//! - [`engine`]: synchronous population dynamics and batch repetition
//! - [`experiment`]: plans, CSV output, figure replication, analysis

pub mod engine;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod landscape;
pub mod seed;
pub mod stats;
pub mod strategy;

pub use error::{Error, Result};
