//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use ccnsim::topology::{generate_random_graph, Graph};

/// Every simple path from `s` to `t`, by exhaustive DFS over the adjacency matrix.
pub fn all_simple_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn dfs(g: &Graph, t: usize, path: &mut Vec<usize>, seen: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for v in 0..g.node_count() {
            if g.is_adjacent(u, v) && !seen[v] {
                seen[v] = true;
                path.push(v);
                dfs(g, t, path, seen, out);
                path.pop();
                seen[v] = false;
            }
        }
    }
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    let mut out = Vec::new();
    dfs(g, t, &mut vec![s], &mut seen, &mut out);
    out
}

/// Shortest paths between `s` and `t`, found by enumeration alone.
pub fn enumerated_shortest_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let paths = all_simple_paths(g, s, t);
    let best = paths.iter().map(Vec::len).min().unwrap();
    paths.into_iter().filter(|p| p.len() == best).collect()
}

/// Normalized betweenness from explicit shortest-path enumeration over
/// unordered pairs.
pub fn brute_force_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut cb = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = enumerated_shortest_paths(g, s, t);
            let total = paths.len() as f64;
            for (v, slot) in cb.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                *slot += through / total;
            }
        }
    }
    let norm = 2.0 / ((n - 1) as f64 * (n - 2) as f64);
    cb.into_iter().map(|x| x * norm).collect()
}

/// Deterministic family of small connected graphs with 3..=8 nodes.
pub fn small_graphs(count: usize) -> Vec<Graph> {
    (0..count as u64)
        .map(|i| {
            let n = 3 + (i % 6) as usize;
            let max = n * (n - 1) / 2;
            let m = (n - 1) + (i as usize * 7 + 3) % (max - (n - 1) + 1);
            generate_random_graph(n, m, 1_000 + i).unwrap()
        })
        .collect()
}

pub fn adjacency_matrix(g: &Graph) -> nalgebra::DMatrix<f64> {
    let n = g.node_count();
    nalgebra::DMatrix::from_fn(n, n, |i, j| if g.is_adjacent(i, j) { 1.0 } else { 0.0 })
}

/// Principal eigenpair from a dense symmetric eigensolver, max-normalized.
pub fn dense_principal_eigenvector(g: &Graph) -> (f64, Vec<f64>) {
    let eig = nalgebra::SymmetricEigen::new(adjacency_matrix(g));
    let (idx, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let col: Vec<f64> = eig.eigenvectors.column(idx).iter().map(|x| x.abs()).collect();
    let max = col.iter().cloned().fold(0.0, f64::max);
    (lambda, col.into_iter().map(|x| x / max).collect())
}

/// `‖Ax − λx‖∞`.
pub fn rayleigh_residual(g: &Graph, x: &[f64], lambda: f64) -> f64 {
    let a = adjacency_matrix(g);
    let v = nalgebra::DVector::from_column_slice(x);
    (a * &v - v * lambda).amax()
}
