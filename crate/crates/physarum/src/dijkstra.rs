//! Dijkstra shortest path, used as the ground-truth oracle throughout the
//! benchmark harness.

use crate::graph::{Graph, NodeId, Path};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    // Min-heap on (dist, node); distances are finite so total order is fine.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest path from the graph's source to its sink.
///
/// The returned length is the optimum; when several optimal paths exist the
/// node sequence is the deterministic one preferred by smaller ids.
pub fn dijkstra(g: &Graph) -> Path {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n + 1];
    let mut pred: Vec<NodeId> = vec![0; n + 1];
    let mut done = vec![false; n + 1];
    let mut heap = BinaryHeap::new();
    dist[g.source()] = 0.0;
    heap.push(HeapItem {
        dist: 0.0,
        node: g.source(),
    });

    while let Some(HeapItem { dist: d, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == g.sink() {
            break;
        }
        for &(nb, edge_idx) in g.neighbors(node) {
            let nd = d + g.edges()[edge_idx].weight;
            if nd < dist[nb] {
                dist[nb] = nd;
                pred[nb] = node;
                heap.push(HeapItem { dist: nd, node: nb });
            }
        }
    }

    // Connectivity is a Graph invariant, so the sink was reached.
    let mut nodes = vec![g.sink()];
    while *nodes.last().unwrap() != g.source() {
        nodes.push(pred[*nodes.last().unwrap()]);
    }
    nodes.reverse();
    Path::from_nodes(g, nodes).expect("predecessor chain is a valid path")
}
