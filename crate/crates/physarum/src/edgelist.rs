//! Plain-text edge-list format.
//!
//! ```text
//! # optional comment lines
//! p sp <nodes> <edges> <source> <sink>
//! <u> <v> <weight>     (one line per edge, 1-based ids)
//! ```

use crate::graph::{Graph, GraphError, NodeId};
use std::fmt::Write as _;

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, GraphError> {
    s.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("cannot parse {what} from {s:?}"),
    })
}

/// Parses the edge-list format into a validated [`Graph`].
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize, NodeId, NodeId)> = None;
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 6 || fields[0] != "p" || fields[1] != "sp" {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!(
                            "expected header \"p sp <n> <m> <source> <sink>\", got {line:?}"
                        ),
                    });
                }
                let n = parse_field(fields[2], line_no, "node count")?;
                let m = parse_field(fields[3], line_no, "edge count")?;
                let s = parse_field(fields[4], line_no, "source")?;
                let t = parse_field(fields[5], line_no, "sink")?;
                header = Some((n, m, s, t));
                edges.reserve(m);
            }
            Some((_, m, _, _)) => {
                if edges.len() == m {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("more than the declared {m} edge lines"),
                    });
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("expected \"<u> <v> <w>\", got {line:?}"),
                    });
                }
                let u: NodeId = parse_field(fields[0], line_no, "node id")?;
                let v: NodeId = parse_field(fields[1], line_no, "node id")?;
                let w: f64 = parse_field(fields[2], line_no, "weight")?;
                if !w.is_finite() || w <= 0.0 {
                    return Err(GraphError::NonPositiveWeight { u, v, weight: w });
                }
                edges.push((u, v, w));
            }
        }
    }

    let (n, m, source, sink) = header.ok_or(GraphError::Parse {
        line: text.lines().count().max(1),
        message: "missing header line".into(),
    })?;
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: text.lines().count(),
            message: format!("declared {m} edges but found {}", edges.len()),
        });
    }
    Graph::build(n, &edges, source, sink)
}

/// Emits the canonical edge-list form of `g`: header followed by the edges
/// in sorted `(u, v)` order. Re-parsing the output reproduces `g` exactly.
pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p sp {} {} {} {}",
        g.node_count(),
        g.edge_count(),
        g.source(),
        g.sink()
    );
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.weight);
    }
    out
}
