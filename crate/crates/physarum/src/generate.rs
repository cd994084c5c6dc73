//! Random graph generators: complete graphs and Watts-Strogatz small-world
//! networks, with uniform integer weights. Both are pure functions of their
//! arguments; a fixed seed reproduces the same graph on every platform.

use crate::graph::{Graph, GraphError, NodeId};
use crate::rng::SplitMix64;
use std::collections::BTreeSet;

/// Connectivity retries for the small-world generator before giving up.
const MAX_CONNECTIVITY_RETRIES: u64 = 100;

fn check_weight_range(w_min: u64, w_max: u64) -> Result<(), GraphError> {
    if w_min == 0 || w_min > w_max {
        return Err(GraphError::InvalidParameter(format!(
            "weight range [{w_min}, {w_max}] must satisfy 0 < w_min <= w_max"
        )));
    }
    Ok(())
}

/// Complete graph on `n` nodes with uniform integer weights in
/// `[w_min, w_max]`. Source is node 1, sink is node 2.
///
/// Weights are drawn in canonical edge order (1,2), (1,3), ..., (n-1,n).
pub fn gen_complete(n: usize, w_min: u64, w_max: u64, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "complete graph needs at least 2 nodes, got {n}"
        )));
    }
    check_weight_range(w_min, w_max)?;
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 1..=n {
        for v in (u + 1)..=n {
            let w = rng.next_range_inclusive(w_min, w_max) as f64;
            edges.push((u, v, w));
        }
    }
    Graph::build(n, &edges, 1, 2)
}

/// Watts-Strogatz small-world graph: a ring lattice where every node is
/// joined to its `mean_degree / 2` nearest neighbors on each side, with each
/// lattice edge rewired with probability `beta` (keeping the graph simple).
/// Uniform integer weights in `[w_min, w_max]`; source 1, sink 2.
///
/// Rewiring can disconnect the graph; in that case the topology is
/// regenerated with the seed incremented by one until connected (bounded
/// number of retries).
pub fn gen_small_world(
    n: usize,
    mean_degree: usize,
    beta: f64,
    w_min: u64,
    w_max: u64,
    seed: u64,
) -> Result<Graph, GraphError> {
    if !mean_degree.is_multiple_of(2) || mean_degree < 2 || mean_degree >= n {
        return Err(GraphError::InvalidParameter(format!(
            "mean degree must be even and in [2, n), got {mean_degree} for n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(GraphError::InvalidParameter(format!(
            "rewiring probability must be in [0, 1], got {beta}"
        )));
    }
    check_weight_range(w_min, w_max)?;

    for retry in 0..MAX_CONNECTIVITY_RETRIES {
        let mut rng = SplitMix64::new(seed.wrapping_add(retry));
        let edges = rewired_lattice(n, mean_degree / 2, beta, &mut rng);
        if !lattice_is_connected(n, &edges) {
            continue;
        }
        // Weights are assigned in canonical sorted edge order.
        let mut sorted: Vec<(NodeId, NodeId)> = edges.into_iter().collect();
        sorted.sort_unstable();
        let weighted: Vec<(NodeId, NodeId, f64)> = sorted
            .into_iter()
            .map(|(u, v)| (u, v, rng.next_range_inclusive(w_min, w_max) as f64))
            .collect();
        return Graph::build(n, &weighted, 1, 2);
    }
    Err(GraphError::GenerationFailed(format!(
        "no connected topology after {MAX_CONNECTIVITY_RETRIES} retries (n = {n}, \
         mean degree = {mean_degree}, beta = {beta})"
    )))
}

/// Ring lattice plus rewiring, as an edge set keyed `(min, max)`.
fn rewired_lattice(
    n: usize,
    half_degree: usize,
    beta: f64,
    rng: &mut SplitMix64,
) -> BTreeSet<(NodeId, NodeId)> {
    let key = |a: NodeId, b: NodeId| if a < b { (a, b) } else { (b, a) };
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut degree = vec![0usize; n + 1];
    for u in 1..=n {
        for j in 1..=half_degree {
            let v = (u - 1 + j) % n + 1;
            if edges.insert(key(u, v)) {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    if beta == 0.0 {
        return edges;
    }
    // Visit the lattice edges in construction order so the draw sequence is
    // well defined.
    for u in 1..=n {
        for j in 1..=half_degree {
            let v = (u - 1 + j) % n + 1;
            if rng.next_f64() >= beta {
                continue;
            }
            if !edges.contains(&key(u, v)) {
                continue; // already rewired away from the other side
            }
            // u may already be adjacent to every other node; then no target
            // is available and the edge stays.
            if degree[u] >= n - 1 {
                continue;
            }
            let w = loop {
                let cand = rng.next_range_inclusive(1, n as u64) as NodeId;
                if cand != u && !edges.contains(&key(u, cand)) {
                    break cand;
                }
            };
            edges.remove(&key(u, v));
            edges.insert(key(u, w));
            degree[v] -= 1;
            degree[w] += 1;
        }
    }
    edges
}

fn lattice_is_connected(n: usize, edges: &BTreeSet<(NodeId, NodeId)>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u - 1].push(v);
        adj[v - 1].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![1];
    seen[0] = true;
    let mut visited = 1;
    while let Some(x) = stack.pop() {
        for &nb in &adj[x - 1] {
            if !seen[nb - 1] {
                seen[nb - 1] = true;
                visited += 1;
                stack.push(nb);
            }
        }
    }
    visited == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_edge_count() {
        let g = gen_complete(50, 1, 10_000, 1).unwrap();
        assert_eq!(g.edge_count(), 1225);
        let g = gen_complete(2, 1, 10_000, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn complete_weights_are_integers_in_range() {
        let g = gen_complete(20, 3, 17, 99).unwrap();
        for e in g.edges() {
            assert_eq!(e.weight, e.weight.trunc());
            assert!((3.0..=17.0).contains(&e.weight));
        }
    }

    #[test]
    fn complete_is_deterministic() {
        let a = gen_complete(5, 1, 10_000, 42).unwrap();
        let b = gen_complete(5, 1, 10_000, 42).unwrap();
        assert_eq!(a, b);
        let c = gen_complete(5, 1, 10_000, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn complete_rejects_bad_params() {
        assert!(gen_complete(1, 1, 10, 0).is_err());
        assert!(gen_complete(5, 0, 10, 0).is_err());
        assert!(gen_complete(5, 11, 10, 0).is_err());
    }

    #[test]
    fn small_world_ring_lattice() {
        // beta = 0: pure ring lattice, 3 neighbors per side, degree 6.
        let g = gen_small_world(50, 6, 0.0, 1, 10_000, 1).unwrap();
        assert_eq!(g.edge_count(), 150);
        for n in 1..=50 {
            assert_eq!(g.neighbors(n).len(), 6);
        }
    }

    #[test]
    fn small_world_cycle() {
        let g = gen_small_world(6, 2, 0.0, 1, 10, 1).unwrap();
        let expected: Vec<(NodeId, NodeId)> = vec![(1, 2), (1, 6), (2, 3), (3, 4), (4, 5), (5, 6)];
        let got: Vec<(NodeId, NodeId)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn small_world_rewired_keeps_edge_count() {
        let g = gen_small_world(100, 12, 0.15, 1, 10_000, 7).unwrap();
        assert_eq!(g.edge_count(), 600);
    }

    #[test]
    fn small_world_is_deterministic() {
        let a = gen_small_world(100, 12, 0.15, 1, 10_000, 7).unwrap();
        let b = gen_small_world(100, 12, 0.15, 1, 10_000, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_world_rejects_bad_degree() {
        assert!(gen_small_world(10, 3, 0.1, 1, 10, 0).is_err()); // odd
        assert!(gen_small_world(10, 10, 0.1, 1, 10, 0).is_err()); // >= n
        assert!(gen_small_world(10, 0, 0.1, 1, 10, 0).is_err());
        assert!(gen_small_world(10, 4, 1.5, 1, 10, 0).is_err());
    }
}
