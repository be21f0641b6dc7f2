use std::path::PathBuf;

use thiserror::Error;

use crate::topology::NodeId;

pub type Result<T, E = SimError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("infeasible edge count {m} for {n} nodes (need {min} <= m <= {max})")]
    InfeasibleEdgeCount { n: usize, m: usize, min: usize, max: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected: node {0} unreachable from node 0")]
    Disconnected(NodeId),

    #[error("no next hop: current node {0} is already the destination")]
    AtDestination(NodeId),

    #[error("betweenness normalization needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("power iteration did not converge within {max_iter} iterations (last delta {delta:e})")]
    NoConvergence { max_iter: usize, delta: f64 },

    #[error("invalid weights ({0}, {1}, {2}): must be non-negative and sum to 1")]
    InvalidWeights(f64, f64, f64),

    #[error("invalid parameter `{key}` = `{value}`: {reason}")]
    InvalidParameter {
        key: String,
        value: String,
        reason: String,
    },

    #[error("malformed packet: {0}")]
    MalformedPacket(String),

    #[error("run finished with anomalies: {0}")]
    Anomalies(String),

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl SimError {
    pub(crate) fn param(key: &str, value: impl ToString, reason: impl Into<String>) -> Self {
        SimError::InvalidParameter {
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
