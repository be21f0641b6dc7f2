//! Cache-admission policies applied on the data return path.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::centrality::Weights;
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Cache,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    Nvcp,
    Lce,
    Prob,
    Mpc,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Nvcp,
        StrategyKind::Lce,
        StrategyKind::Prob,
        StrategyKind::Mpc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Nvcp => "nvcp",
            StrategyKind::Lce => "lce",
            StrategyKind::Prob => "prob",
            StrategyKind::Mpc => "mpc",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nvcp" => Ok(StrategyKind::Nvcp),
            "lce" => Ok(StrategyKind::Lce),
            "prob" => Ok(StrategyKind::Prob),
            "mpc" => Ok(StrategyKind::Mpc),
            _ => Err(SimError::param("strategy", s, "expected one of nvcp, lce, prob, mpc")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    pub prob_p: f64,
    pub mpc_threshold: f64,
    pub weights: Weights,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        StrategyConfig {
            kind,
            prob_p: 0.5,
            mpc_threshold: 0.5,
            weights: Weights::equal(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.prob_p) {
            return Err(SimError::param("prob_p", self.prob_p, "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mpc_threshold) {
            return Err(SimError::param("mpc_threshold", self.mpc_threshold, "must lie in [0, 1]"));
        }
        let w = self.weights;
        Weights::new(w.connectivity, w.betweenness, w.eigenvector)?;
        Ok(())
    }

    /// Verdict for one on-path router. `node_value` is only consulted by NVCP
    /// and `rng` only by Prob.
    pub fn decide<R: Rng + ?Sized>(&self, popularity: f64, node_value: f64, rng: &mut R) -> Verdict {
        match self.kind {
            StrategyKind::Nvcp => nvcp_decide(popularity, node_value),
            StrategyKind::Lce => lce_decide(),
            StrategyKind::Prob => prob_decide(rng, self.prob_p),
            StrategyKind::Mpc => mpc_decide(popularity, self.mpc_threshold),
        }
    }
}

/// Cache iff `φ = P / M ≥ 1`, i.e. iff popularity reaches the node value.
/// Zero popularity never caches.
pub fn nvcp_decide(popularity: f64, node_value: f64) -> Verdict {
    if popularity > 0.0 && popularity >= node_value {
        Verdict::Cache
    } else {
        Verdict::Forward
    }
}

pub fn lce_decide() -> Verdict {
    Verdict::Cache
}

pub fn prob_decide<R: Rng + ?Sized>(rng: &mut R, p: f64) -> Verdict {
    if rng.random::<f64>() < p {
        Verdict::Cache
    } else {
        Verdict::Forward
    }
}

pub fn mpc_decide(popularity: f64, threshold: f64) -> Verdict {
    if popularity >= threshold {
        Verdict::Cache
    } else {
        Verdict::Forward
    }
}
