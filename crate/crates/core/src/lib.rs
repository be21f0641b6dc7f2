//! Discrete-event simulator for in-network caching in content-centric
//! networks.
//!
//! Routers keep an LRU Content Store, a PIT, and request counters. On the
//! data return path each router decides whether to cache via one of four
//! admission policies: NVCP (content popularity against a node value built
//! from connectivity, betweenness, and eigenvector centrality), LCE,
//! Prob(p), and MPC. Runs report cache hit ratio, average hop count, and
//! average latency.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centrality;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod node;
pub mod packet;
pub mod rng;
pub mod strategy;
pub mod topology;
pub mod workload;

pub use centrality::{CentralityTable, Weights};
pub use engine::{run, run_trace, sweep, EngineConfig, Experiment, LinkModel, Scenario, SweepParam};
pub use error::{Result, SimError};
pub use metrics::{MetricsAccumulator, MetricsReport};
pub use strategy::{StrategyConfig, StrategyKind, Verdict};
pub use topology::{Graph, NodeId, ShortestPathTable};
pub use workload::{RequestTrace, WorkloadConfig};
