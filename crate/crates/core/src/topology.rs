//! Undirected router topology, random generation, and shortest-path tables.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, SimError};
use crate::rng::{stream_rng, TOPOLOGY_STREAM};

pub type NodeId = usize;

/// Simple, connected, undirected graph over nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    /// Sorted `(u, v)` pairs with `u < v`.
    edges: Vec<(NodeId, NodeId)>,
    /// Sorted neighbor lists.
    neighbors: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges,
    /// out-of-range ids, and disconnected inputs.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(SimError::InvalidGraph("graph needs at least one node".into()));
        }
        let mut adjacency = vec![false; n * n];
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(SimError::InvalidGraph(format!("edge ({a}, {b}) out of range for {n} nodes")));
            }
            if a == b {
                return Err(SimError::InvalidGraph(format!("self-loop on node {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !set.insert((u, v)) {
                return Err(SimError::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
        }
        let neighbors = (0..n)
            .map(|u| (0..n).filter(|&v| adjacency[u * n + v]).collect())
            .collect();
        let graph = Graph {
            n,
            adjacency,
            edges: set.into_iter().collect(),
            neighbors,
        };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(v) => Err(SimError::Disconnected(v)),
            None => Ok(()),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn is_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u * self.n + v]
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.neighbors[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.neighbors[u].len()
    }

    /// Edge-list text: a `n m` header, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| SimError::InvalidGraph("empty edge list".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(SimError::InvalidGraph(format!(
                "header declares {m} edges but {} were listed",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list()).map_err(|e| SimError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        Graph::from_edge_list(&text)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(SimError::InvalidGraph(format!("malformed line `{line}`"))),
    }
}

/// Random connected simple graph with exactly `n` nodes and `m` edges.
///
/// A uniform random spanning tree (random permutation, each node attached to
/// a random earlier one) guarantees connectivity; the remaining edges are
/// drawn uniformly without replacement from the non-edges.
pub fn generate_random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max = n * n.saturating_sub(1) / 2;
    let min = n.saturating_sub(1);
    if n == 0 || m < min || m > max {
        return Err(SimError::InfeasibleEdgeCount { n, m, min, max });
    }
    let mut rng = stream_rng(seed, TOPOLOGY_STREAM);

    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        let child = order[i];
        edges.insert((parent.min(child), parent.max(child)));
    }

    let mut candidates: Vec<(NodeId, NodeId)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !edges.contains(e))
        .collect();
    let extra = m - (n - 1);
    let (chosen, _) = candidates.partial_shuffle(&mut rng, extra);
    edges.extend(chosen.iter().copied());

    Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>())
}

/// All-pairs hop distances, shortest-path counts, and equal-cost next hops.
#[derive(Debug, Clone)]
pub struct ShortestPathTable {
    n: usize,
    dist: Vec<u32>,
    sigma: Vec<u64>,
    next_hops: Vec<Vec<NodeId>>,
}

impl ShortestPathTable {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn dist(&self, s: NodeId, t: NodeId) -> u32 {
        self.dist[s * self.n + t]
    }

    /// Number of distinct shortest paths between `s` and `t`.
    pub fn sigma(&self, s: NodeId, t: NodeId) -> u64 {
        self.sigma[s * self.n + t]
    }

    /// Neighbors of `s` lying on at least one shortest path to `t`, ascending.
    pub fn next_hops(&self, s: NodeId, t: NodeId) -> &[NodeId] {
        &self.next_hops[s * self.n + t]
    }

    /// FIB lookup: the lowest-id equal-cost next hop from `current` toward `destination`.
    pub fn route_next_hop(&self, current: NodeId, destination: NodeId) -> Result<NodeId> {
        if current == destination {
            return Err(SimError::AtDestination(current));
        }
        Ok(self.next_hops(current, destination)[0])
    }

    /// The deterministic forwarding path from `s` to `t`, both endpoints included.
    pub fn route(&self, s: NodeId, t: NodeId) -> Vec<NodeId> {
        let mut path = vec![s];
        let mut cur = s;
        while cur != t {
            cur = self.next_hops(cur, t)[0];
            path.push(cur);
        }
        path
    }
}

/// BFS from every source, counting shortest paths along the way.
pub fn all_pairs_shortest_paths(g: &Graph) -> ShortestPathTable {
    let n = g.node_count();
    let mut dist = vec![u32::MAX; n * n];
    let mut sigma = vec![0u64; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = s * n;
        dist[row + s] = 0;
        sigma[row + s] = 1;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[row + u];
            for &v in g.neighbors(u) {
                if dist[row + v] == u32::MAX {
                    dist[row + v] = du + 1;
                    queue.push_back(v);
                }
                if dist[row + v] == du + 1 {
                    sigma[row + v] += sigma[row + u];
                }
            }
        }
    }
    let mut next_hops = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let hops = if s == t {
                Vec::new()
            } else {
                let d = dist[s * n + t];
                g.neighbors(s)
                    .iter()
                    .copied()
                    .filter(|&h| dist[h * n + t] + 1 == d)
                    .collect()
            };
            next_hops.push(hops);
        }
    }
    ShortestPathTable {
        n,
        dist,
        sigma,
        next_hops,
    }
}
