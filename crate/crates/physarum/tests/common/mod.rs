//! Shared test helpers: an exhaustive shortest-path oracle and a small
//! random-graph source, both independent of the library's solver paths.

// each test binary uses a subset of these helpers
#![allow(dead_code)]

use physarum::graph::{Graph, NodeId};
use physarum::rng::SplitMix64;

/// Exhaustive enumeration of every simple source->sink path. Only usable on
/// tiny graphs; this is the ground truth the fast paths are checked against.
pub fn brute_force_shortest(g: &Graph) -> f64 {
    fn dfs(g: &Graph, node: NodeId, visited: &mut [bool], length: f64, best: &mut f64) {
        if node == g.sink() {
            if length < *best {
                *best = length;
            }
            return;
        }
        for &(nb, edge_idx) in g.neighbors(node) {
            if !visited[nb] {
                visited[nb] = true;
                dfs(g, nb, visited, length + g.edges()[edge_idx].weight, best);
                visited[nb] = false;
            }
        }
    }
    let mut visited = vec![false; g.node_count() + 1];
    visited[g.source()] = true;
    let mut best = f64::INFINITY;
    dfs(g, g.source(), &mut visited, 0.0, &mut best);
    best
}

/// Random connected graph: a random spanning tree plus extra edges with
/// probability ~0.4, integer weights in [1, w_max]. Source 1, sink n.
pub fn random_connected_graph(n: usize, w_max: u64, seed: u64) -> Graph {
    assert!(n >= 2);
    let mut rng = SplitMix64::new(seed);
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::new();
    for v in 2..=n {
        let u = rng.next_range_inclusive(1, v as u64 - 1) as NodeId;
        edges.push((u, v, rng.next_range_inclusive(1, w_max) as f64));
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            let in_tree = edges
                .iter()
                .any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u));
            if !in_tree && rng.next_f64() < 0.4 {
                edges.push((u, v, rng.next_range_inclusive(1, w_max) as f64));
            }
        }
    }
    Graph::build(n, &edges, 1, n).expect("spanning tree keeps this connected")
}
