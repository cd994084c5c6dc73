//! Graph data model: undirected, positively weighted, connected, with a
//! designated source/sink pair. Node ids are 1-based, matching the on-disk
//! formats.

use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

/// 1-based node identifier.
pub type NodeId = usize;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("non-positive weight {weight} on edge ({u}, {v})")]
    NonPositiveWeight { u: NodeId, v: NodeId, weight: f64 },
    #[error("invalid terminal: {0}")]
    InvalidTerminal(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("metadata mismatch: {0}")]
    MetadataMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph generation failed: {0}")]
    GenerationFailed(String),
}

/// One undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    /// The endpoint that is not `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected weighted graph with a source/sink pair.
///
/// Construction validates every invariant (simple, positive weights, valid
/// terminals, connected) and canonicalizes the edge order, so two graphs
/// built from the same edge set compare equal and index their edges
/// identically. Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    source: NodeId,
    sink: NodeId,
    // adjacency[node - 1]: (neighbor, index into edges), sorted by neighbor
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl Graph {
    /// Builds and validates a graph from an edge list.
    ///
    /// Edges may be given in any order and orientation; they are
    /// canonicalized to `u < v` and sorted.
    pub fn build(
        node_count: usize,
        edge_list: &[(NodeId, NodeId, f64)],
        source: NodeId,
        sink: NodeId,
    ) -> Result<Self, GraphError> {
        if node_count < 2 {
            return Err(GraphError::InvalidParameter(format!(
                "node count must be at least 2, got {node_count}"
            )));
        }
        let valid = |n: NodeId| (1..=node_count).contains(&n);
        if !valid(source) || !valid(sink) {
            return Err(GraphError::InvalidTerminal(format!(
                "source {source} / sink {sink} out of range 1..={node_count}"
            )));
        }
        if source == sink {
            return Err(GraphError::InvalidTerminal(format!(
                "source and sink are both node {source}"
            )));
        }

        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b, weight) in edge_list {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !valid(a) || !valid(b) {
                return Err(GraphError::InvalidParameter(format!(
                    "edge ({a}, {b}) references a node outside 1..={node_count}"
                )));
            }
            if !weight.is_finite() || weight <= 0.0 {
                return Err(GraphError::NonPositiveWeight { u: a, v: b, weight });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            edges.push(Edge { u, v, weight });
        }
        edges.sort_by_key(|e| (e.u, e.v));
        for w in edges.windows(2) {
            if (w[0].u, w[0].v) == (w[1].u, w[1].v) {
                return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
            }
        }

        let mut adjacency = vec![Vec::new(); node_count];
        for (idx, e) in edges.iter().enumerate() {
            adjacency[e.u - 1].push((e.v, idx));
            adjacency[e.v - 1].push((e.u, idx));
        }

        let g = Self {
            node_count,
            edges,
            source,
            sink,
            adjacency,
        };
        if !g.is_connected() {
            return Err(GraphError::DisconnectedGraph);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![1];
        seen[0] = true;
        let mut visited = 1;
        while let Some(n) = stack.pop() {
            for &(nb, _) in &self.adjacency[n - 1] {
                if !seen[nb - 1] {
                    seen[nb - 1] = true;
                    visited += 1;
                    stack.push(nb);
                }
            }
        }
        visited == self.node_count
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    /// `(neighbor, edge index)` pairs of `node`, sorted by neighbor id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[node - 1]
    }

    /// Same graph with different terminals.
    pub fn with_terminals(&self, source: NodeId, sink: NodeId) -> Result<Self, GraphError> {
        let list: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, e.weight)).collect();
        Self::build(self.node_count, &list, source, sink)
    }
}

/// A simple path from the graph's source to its sink, with its exact length
/// (the sum of the traversed edge weights, accumulated in path order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path {
    nodes: Vec<NodeId>,
    length: f64,
}

impl Path {
    /// Validates the node sequence against `g` (consecutive nodes adjacent,
    /// no repeats) and computes the length.
    pub fn from_nodes(g: &Graph, nodes: Vec<NodeId>) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::InvalidParameter("empty path".into()));
        }
        let mut seen = HashSet::new();
        for &n in &nodes {
            if !(1..=g.node_count()).contains(&n) {
                return Err(GraphError::InvalidParameter(format!(
                    "path node {n} out of range"
                )));
            }
            if !seen.insert(n) {
                return Err(GraphError::InvalidParameter(format!(
                    "path repeats node {n}"
                )));
            }
        }
        let mut length = 0.0;
        for w in nodes.windows(2) {
            match g.neighbors(w[0]).iter().find(|(nb, _)| *nb == w[1]) {
                Some(&(_, idx)) => length += g.edges()[idx].weight,
                None => {
                    return Err(GraphError::InvalidParameter(format!(
                        "nodes {} and {} are not adjacent",
                        w[0], w[1]
                    )))
                }
            }
        }
        Ok(Self { nodes, length })
    }

    pub(crate) fn from_parts(nodes: Vec<NodeId>, length: f64) -> Self {
        Self { nodes, length }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Builds a validated [`Graph`]; see [`Graph::build`].
pub fn build_graph(
    node_count: usize,
    edge_list: &[(NodeId, NodeId, f64)],
    source: NodeId,
    sink: NodeId,
) -> Result<Graph, GraphError> {
    Graph::build(node_count, edge_list, source, sink)
}

#[cfg(test)]
pub(crate) fn triangle_fixture() -> Graph {
    // Two source->sink routes: direct (length 10) and via node 3 (length 7).
    Graph::build(3, &[(1, 2, 10.0), (1, 3, 3.0), (3, 2, 4.0)], 1, 2).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_legal_graph() {
        let g = build_graph(2, &[(1, 2, 5.0)], 1, 2).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.source(), 1);
        assert_eq!(g.sink(), 2);
    }

    #[test]
    fn triangle_fixture_shape() {
        let g = triangle_fixture();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        // canonical order: (1,2), (1,3), (2,3)
        assert_eq!(g.edges()[0].weight, 10.0);
        assert_eq!(g.edges()[1].weight, 3.0);
        assert_eq!(g.edges()[2].weight, 4.0);
        assert_eq!(g.neighbors(3), &[(1, 1), (2, 2)]);
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = build_graph(3, &[(1, 2, 1.0)], 1, 3).unwrap_err();
        assert_eq!(err, GraphError::DisconnectedGraph);
    }

    #[test]
    fn duplicate_edge_is_rejected() {
        let err = build_graph(3, &[(1, 2, 1.0), (2, 1, 2.0), (2, 3, 1.0)], 1, 3).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(1, 2));
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = build_graph(2, &[(1, 1, 1.0), (1, 2, 1.0)], 1, 2).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop(1));
    }

    #[test]
    fn non_positive_weight_is_rejected() {
        let err = build_graph(2, &[(1, 2, -5.0)], 1, 2).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveWeight { .. }));
        let err = build_graph(2, &[(1, 2, 0.0)], 1, 2).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveWeight { .. }));
    }

    #[test]
    fn bad_terminals_are_rejected() {
        let err = build_graph(2, &[(1, 2, 1.0)], 1, 1).unwrap_err();
        assert!(matches!(err, GraphError::InvalidTerminal(_)));
        let err = build_graph(2, &[(1, 2, 1.0)], 1, 3).unwrap_err();
        assert!(matches!(err, GraphError::InvalidTerminal(_)));
    }

    #[test]
    fn edge_order_is_canonical() {
        let a = build_graph(3, &[(3, 2, 4.0), (1, 3, 3.0), (2, 1, 10.0)], 1, 2).unwrap();
        assert_eq!(a, triangle_fixture());
    }

    #[test]
    fn path_length_is_exact_sum() {
        let g = triangle_fixture();
        let p = Path::from_nodes(&g, vec![1, 3, 2]).unwrap();
        assert_eq!(p.length(), 7.0);
        let p = Path::from_nodes(&g, vec![1, 2]).unwrap();
        assert_eq!(p.length(), 10.0);
    }

    #[test]
    fn path_rejects_non_adjacent_and_repeats() {
        let g = build_graph(4, &[(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)], 1, 4).unwrap();
        assert!(Path::from_nodes(&g, vec![1, 3]).is_err());
        assert!(Path::from_nodes(&g, vec![1, 2, 1]).is_err());
    }
}
