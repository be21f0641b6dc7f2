//! Static node-value attributes: betweenness, eigenvector centrality, and
//! the weighted composite that also folds in live connectivity.

use std::collections::VecDeque;

use crate::error::{Result, SimError};
use crate::topology::{Graph, NodeId};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Diagonal shift for power iteration on `A + shift * I`.
pub const EIGEN_SHIFT: f64 = 1.0;

const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Convex weights for connectivity, betweenness, and eigenvector centrality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub connectivity: f64,
    pub betweenness: f64,
    pub eigenvector: f64,
}

impl Weights {
    pub fn new(connectivity: f64, betweenness: f64, eigenvector: f64) -> Result<Self> {
        let all = [connectivity, betweenness, eigenvector];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0)
            || (all.iter().sum::<f64>() - 1.0).abs() > WEIGHT_SUM_TOL
        {
            return Err(SimError::InvalidWeights(connectivity, betweenness, eigenvector));
        }
        Ok(Weights {
            connectivity,
            betweenness,
            eigenvector,
        })
    }

    pub fn equal() -> Self {
        Weights {
            connectivity: 1.0 / 3.0,
            betweenness: 1.0 / 3.0,
            eigenvector: 1.0 / 3.0,
        }
    }

    /// `M = α·C_S + β·C_B + γ·C_E`.
    pub fn composite(&self, c_s: f64, c_b: f64, c_e: f64) -> f64 {
        self.connectivity * c_s + self.betweenness * c_b + self.eigenvector * c_e
    }
}

impl Default for Weights {
    fn default() -> Self {
        Weights::equal()
    }
}

/// Weighted node value from raw weights, validating them first.
pub fn composite_value(c_s: f64, c_b: f64, c_e: f64, weights: (f64, f64, f64)) -> Result<f64> {
    Ok(Weights::new(weights.0, weights.1, weights.2)?.composite(c_s, c_b, c_e))
}

/// Normalized betweenness in `[0, 1]` via Brandes' dependency accumulation.
///
/// Each unordered pair `{s, t}` contributes once, scaled by
/// `2 / ((n - 1)(n - 2))`.
pub fn betweenness_centrality(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n < 3 {
        return Err(SimError::TooFewNodes(n));
    }
    let mut cb = vec![0.0; n];
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        preds.iter_mut().for_each(Vec::clear);
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                cb[w] += delta[w];
            }
        }
    }

    // Ordered-pair sums count each unordered pair twice.
    let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
    Ok(cb.into_iter().map(|x| x * scale).collect())
}

#[derive(Debug, Clone)]
pub struct EigenvectorCentrality {
    /// Principal eigenvector, max-normalized to 1.
    pub scores: Vec<f64>,
    /// Rayleigh quotient of `A` at the returned vector.
    pub eigenvalue: f64,
    pub iterations: usize,
}

/// Principal eigenvector of the adjacency matrix by power iteration on the
/// shifted matrix `A + EIGEN_SHIFT·I`, starting from all ones.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> Result<EigenvectorCentrality> {
    if !(tol > 0.0) {
        return Err(SimError::param("tol", tol, "must be positive"));
    }
    let n = g.node_count();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut delta = f64::INFINITY;
    for iter in 1..=max_iter {
        for (u, slot) in next.iter_mut().enumerate() {
            *slot = EIGEN_SHIFT * x[u] + g.neighbors(u).iter().map(|&v| x[v]).sum::<f64>();
        }
        let max = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|v| *v /= max);
        delta = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if delta < tol {
            let eigenvalue = rayleigh_quotient(g, &x);
            return Ok(EigenvectorCentrality {
                scores: x,
                eigenvalue,
                iterations: iter,
            });
        }
    }
    Err(SimError::NoConvergence { max_iter, delta })
}

/// `xᵀAx / xᵀx`.
pub fn rayleigh_quotient(g: &Graph, x: &[f64]) -> f64 {
    let num: f64 = (0..g.node_count())
        .map(|u| x[u] * g.neighbors(u).iter().map(|&v| x[v]).sum::<f64>())
        .sum();
    let den: f64 = x.iter().map(|v| v * v).sum();
    num / den
}

/// Per-node static attributes, computed once per topology.
#[derive(Debug, Clone)]
pub struct CentralityTable {
    pub betweenness: Vec<f64>,
    pub eigenvector: Vec<f64>,
    pub weights: Weights,
}

impl CentralityTable {
    /// Graphs with fewer than three nodes have no interior node on any
    /// shortest path, so their betweenness is taken as zero.
    pub fn compute(g: &Graph, weights: Weights) -> Result<Self> {
        let betweenness = match g.node_count() {
            0..=2 => vec![0.0; g.node_count()],
            _ => betweenness_centrality(g)?,
        };
        Ok(CentralityTable {
            betweenness,
            eigenvector: eigenvector_centrality(g, DEFAULT_TOL, DEFAULT_MAX_ITER)?.scores,
            weights,
        })
    }

    /// Node value `M(v)` given the node's current connectivity.
    pub fn node_value(&self, node: NodeId, connectivity: f64) -> f64 {
        self.weights
            .composite(connectivity, self.betweenness[node], self.eigenvector[node])
    }

    /// CSV dump: `node,betweenness,eigenvector`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,betweenness,eigenvector\n");
        for (i, (b, e)) in self.betweenness.iter().zip(&self.eigenvector).enumerate() {
            out.push_str(&format!("{i},{b:.6},{e:.6}\n"));
        }
        out
    }
}
