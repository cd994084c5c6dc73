//! Parser for the TNTP transportation-network format: angle-bracket metadata
//! tags, an optional `~` column-header row, and a whitespace-separated link
//! table with `;` row terminators.
//!
//! Link rows are directed; the parser collapses each (u,v)/(v,u) pair into
//! one undirected edge carrying the minimum of the pair's weights.

use crate::graph::{Graph, GraphError, NodeId};
use std::collections::{BTreeMap, BTreeSet};

/// Which link-table column supplies the edge weight.
///
/// The canonical column layout is `init_node term_node capacity length
/// free_flow_time b power speed toll link_type`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightColumn {
    Capacity,
    #[default]
    Length,
    FreeFlowTime,
    /// Raw 0-based field index into the row (>= 2).
    Field(usize),
}

impl WeightColumn {
    fn index(self) -> usize {
        match self {
            WeightColumn::Capacity => 2,
            WeightColumn::Length => 3,
            WeightColumn::FreeFlowTime => 4,
            WeightColumn::Field(i) => i,
        }
    }

    /// Accepts a column name or a raw 0-based field index.
    pub fn parse(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "capacity" => Ok(WeightColumn::Capacity),
            "length" => Ok(WeightColumn::Length),
            "fft" | "free_flow_time" => Ok(WeightColumn::FreeFlowTime),
            other => match other.parse::<usize>() {
                Ok(i) if i >= 2 => Ok(WeightColumn::Field(i)),
                _ => Err(format!(
                    "unknown weight column {s:?} (expected capacity, length, fft, or a field index >= 2)"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TntpOptions {
    pub weight_column: WeightColumn,
    /// Defaults to node 1.
    pub source: Option<NodeId>,
    /// Defaults to the highest node id.
    pub sink: Option<NodeId>,
}

/// What the file declared and what was actually parsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TntpStats {
    pub nodes: usize,
    pub directed_links: usize,
    pub undirected_edges: usize,
    pub first_thru_node: NodeId,
}

/// Parses a TNTP network file into a validated [`Graph`] plus the parse
/// statistics (declared node count, directed link count).
pub fn parse_tntp(text: &str, options: TntpOptions) -> Result<(Graph, TntpStats), GraphError> {
    let mut declared_nodes: Option<usize> = None;
    let mut declared_links: Option<usize> = None;
    let mut first_thru_node: NodeId = 1;
    let mut rows: Vec<(NodeId, NodeId, f64)> = Vec::new();
    let weight_idx = options.weight_column.index();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('~') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('<') {
            let (tag, value) = rest.split_once('>').ok_or(GraphError::Parse {
                line: line_no,
                message: "unterminated metadata tag".into(),
            })?;
            let value = value.trim();
            match tag.trim().to_ascii_uppercase().as_str() {
                "NUMBER OF NODES" => {
                    declared_nodes = Some(parse_meta(value, line_no, "node count")?)
                }
                "NUMBER OF LINKS" => {
                    declared_links = Some(parse_meta(value, line_no, "link count")?)
                }
                "FIRST THRU NODE" => {
                    first_thru_node = parse_meta(value, line_no, "first thru node")?
                }
                _ => {} // zones, original header, end of metadata, ...
            }
            continue;
        }
        // Link row: strip the ';' terminator, split on whitespace.
        let row = line.trim_end_matches(';').trim_end();
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(GraphError::Parse {
                line: line_no,
                message: format!("link row too short: {line:?}"),
            });
        }
        let from: NodeId = fields[0].parse().map_err(|_| GraphError::Parse {
            line: line_no,
            message: format!("cannot parse init node from {:?}", fields[0]),
        })?;
        let to: NodeId = fields[1].parse().map_err(|_| GraphError::Parse {
            line: line_no,
            message: format!("cannot parse term node from {:?}", fields[1]),
        })?;
        let field = fields.get(weight_idx).ok_or(GraphError::Parse {
            line: line_no,
            message: format!(
                "link row has {} fields, weight column {weight_idx} missing",
                fields.len()
            ),
        })?;
        let weight: f64 = field.parse().map_err(|_| GraphError::Parse {
            line: line_no,
            message: format!("cannot parse weight from {field:?}"),
        })?;
        if from == to {
            return Err(GraphError::SelfLoop(from));
        }
        if !weight.is_finite() || weight <= 0.0 {
            return Err(GraphError::NonPositiveWeight {
                u: from,
                v: to,
                weight,
            });
        }
        rows.push((from, to, weight));
    }

    let nodes = declared_nodes.ok_or(GraphError::Parse {
        line: 1,
        message: "missing <NUMBER OF NODES> metadata".into(),
    })?;
    let links = declared_links.ok_or(GraphError::Parse {
        line: 1,
        message: "missing <NUMBER OF LINKS> metadata".into(),
    })?;
    if rows.len() != links {
        return Err(GraphError::MetadataMismatch(format!(
            "declared {links} links but parsed {} rows",
            rows.len()
        )));
    }

    let mut ids: BTreeSet<NodeId> = BTreeSet::new();
    for &(u, v, _) in &rows {
        ids.insert(u);
        ids.insert(v);
    }
    if let Some(&max) = ids.iter().next_back() {
        if max > nodes {
            return Err(GraphError::MetadataMismatch(format!(
                "node id {max} exceeds declared node count {nodes}"
            )));
        }
    }
    if ids.len() != nodes {
        return Err(GraphError::MetadataMismatch(format!(
            "declared {nodes} nodes but link table references {} distinct ids",
            ids.len()
        )));
    }

    // Collapse directed pairs; an unpaired one-way link also becomes one
    // undirected edge.
    let mut undirected: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
    for &(u, v, w) in &rows {
        let key = if u < v { (u, v) } else { (v, u) };
        undirected
            .entry(key)
            .and_modify(|cur| *cur = cur.min(w))
            .or_insert(w);
    }
    let edges: Vec<(NodeId, NodeId, f64)> =
        undirected.iter().map(|(&(u, v), &w)| (u, v, w)).collect();

    let source = options.source.unwrap_or(1);
    let sink = options.sink.unwrap_or(nodes);
    let graph = Graph::build(nodes, &edges, source, sink)?;
    let stats = TntpStats {
        nodes,
        directed_links: links,
        undirected_edges: edges.len(),
        first_thru_node,
    };
    Ok((graph, stats))
}

fn parse_meta(value: &str, line: usize, what: &str) -> Result<usize, GraphError> {
    value.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("cannot parse {what} from {value:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
<NUMBER OF ZONES> 3
<NUMBER OF NODES> 3
<FIRST THRU NODE> 1
<NUMBER OF LINKS> 6
<END OF METADATA>

~ \tInit node \tTerm node \tCapacity \tLength \tFree Flow Time \tB\tPower\tSpeed limit \tToll \tType\t;
\t1\t2\t25900.2\t10\t9\t0.15\t4\t0\t0\t1\t;
\t2\t1\t25900.2\t12\t9\t0.15\t4\t0\t0\t1\t;
\t1\t3\t4958.1\t3\t2\t0.15\t4\t0\t0\t1\t;
\t3\t1\t4958.1\t3\t2\t0.15\t4\t0\t0\t1\t;
\t2\t3\t23403.4\t4\t5\t0.15\t4\t0\t0\t1\t;
\t3\t2\t23403.4\t4\t5\t0.15\t4\t0\t0\t1\t;
";

    #[test]
    fn parses_and_collapses_directed_pairs() {
        let (g, stats) = parse_tntp(SMALL, TntpOptions::default()).unwrap();
        assert_eq!(stats.nodes, 3);
        assert_eq!(stats.directed_links, 6);
        assert_eq!(stats.undirected_edges, 3);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.source(), 1);
        assert_eq!(g.sink(), 3);
        // (1,2) takes the minimum of the 10/12 pair.
        assert_eq!(g.edges()[0].weight, 10.0);
        assert_eq!(g.edges()[1].weight, 3.0);
        assert_eq!(g.edges()[2].weight, 4.0);
    }

    #[test]
    fn weight_column_selection() {
        let opts = TntpOptions {
            weight_column: WeightColumn::FreeFlowTime,
            ..Default::default()
        };
        let (g, _) = parse_tntp(SMALL, opts).unwrap();
        assert_eq!(g.edges()[0].weight, 9.0);
        assert_eq!(g.edges()[1].weight, 2.0);
        assert_eq!(g.edges()[2].weight, 5.0);
    }

    #[test]
    fn terminal_overrides() {
        let opts = TntpOptions {
            source: Some(2),
            sink: Some(1),
            ..Default::default()
        };
        let (g, _) = parse_tntp(SMALL, opts).unwrap();
        assert_eq!((g.source(), g.sink()), (2, 1));
    }

    #[test]
    fn link_count_mismatch() {
        let text = SMALL.replace("<NUMBER OF LINKS> 6", "<NUMBER OF LINKS> 7");
        let err = parse_tntp(&text, TntpOptions::default()).unwrap_err();
        assert!(matches!(err, GraphError::MetadataMismatch(_)));
    }

    #[test]
    fn node_count_mismatch() {
        // Declares 4 nodes but only 3 distinct ids appear.
        let text = SMALL.replace("<NUMBER OF NODES> 3", "<NUMBER OF NODES> 4");
        let err = parse_tntp(&text, TntpOptions::default()).unwrap_err();
        match err {
            GraphError::MetadataMismatch(msg) => assert!(msg.contains("3 distinct ids")),
            other => panic!("expected MetadataMismatch, got {other:?}"),
        }
    }

    #[test]
    fn missing_metadata_is_a_parse_error() {
        let text = SMALL.replace("<NUMBER OF NODES> 3\n", "");
        assert!(matches!(
            parse_tntp(&text, TntpOptions::default()),
            Err(GraphError::Parse { .. })
        ));
    }

    #[test]
    fn weight_column_names() {
        assert_eq!(WeightColumn::parse("length").unwrap(), WeightColumn::Length);
        assert_eq!(
            WeightColumn::parse("FFT").unwrap(),
            WeightColumn::FreeFlowTime
        );
        assert_eq!(WeightColumn::parse("5").unwrap(), WeightColumn::Field(5));
        assert!(WeightColumn::parse("1").is_err());
        assert!(WeightColumn::parse("bogus").is_err());
    }
}
