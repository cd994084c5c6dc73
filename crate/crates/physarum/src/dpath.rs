//! Dominant path, termination criteria, and transition-point detection.
//!
//! The dominant path (D-Path) is read off a flux assignment by walking from
//! the source: at each step take the incident edge carrying the largest
//! absolute flux among the edges still present, append its far endpoint,
//! then delete the node just left (with all its edges) from the working
//! copy. The walk ends when the sink is appended. Node deletion makes the
//! result a simple path by construction.

use crate::engine::TraceEntry;
use crate::graph::{Graph, NodeId, Path};
use thiserror::Error;

/// Confirmation window of the transition-point protocol: the optimal length
/// must hold for at least this many further iterations.
pub const DEFAULT_TPOINT_WINDOW: usize = 50;

/// The dominant-path walk reached a dead end, or failed to reach the sink
/// within `node_count - 1` steps.
#[derive(Debug, Error, PartialEq, Eq)]
#[error(
    "dominant-path extraction failed: {reason} (walked {steps} steps, stuck at node {at_node})"
)]
pub struct DPathExtractionFailed {
    pub at_node: NodeId,
    pub steps: usize,
    pub reason: &'static str,
}

/// Extracts the dominant path for the per-edge fluxes `fluxes` (indexed like
/// `g.edges()`). Flux magnitudes are compared; ties go to the smaller
/// neighbor id, so extraction is deterministic.
pub fn extract_dpath(g: &Graph, fluxes: &[f64]) -> Result<Path, DPathExtractionFailed> {
    assert_eq!(fluxes.len(), g.edge_count(), "one flux per edge");
    let mut deleted = vec![false; g.node_count() + 1];
    let mut nodes = vec![g.source()];
    let mut length = 0.0;
    let mut current = g.source();

    for step in 0..g.node_count() {
        let mut best: Option<(f64, NodeId, f64)> = None; // (|flux|, neighbor, weight)
        for &(nb, edge_idx) in g.neighbors(current) {
            if deleted[nb] {
                continue;
            }
            let magnitude = fluxes[edge_idx].abs();
            let better = match best {
                None => true,
                Some((best_mag, best_nb, _)) => {
                    magnitude > best_mag || (magnitude == best_mag && nb < best_nb)
                }
            };
            if better {
                best = Some((magnitude, nb, g.edges()[edge_idx].weight));
            }
        }
        let (_, next, weight) = best.ok_or(DPathExtractionFailed {
            at_node: current,
            steps: step,
            reason: "no remaining incident edge",
        })?;
        deleted[current] = true;
        nodes.push(next);
        length += weight;
        current = next;
        if next == g.sink() {
            return Ok(Path::from_parts(nodes, length));
        }
    }
    Err(DPathExtractionFailed {
        at_node: current,
        steps: g.node_count(),
        reason: "sink not reached",
    })
}

/// Stopping rule evaluated against the trace after every iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum TerminationCriterion {
    /// Fires when the summed per-iteration conductivity change drops to
    /// `epsilon` or below.
    EpsilonDeltaD { epsilon: f64 },
    /// Fires when the dominant path has stayed identical for `k`
    /// consecutive comparisons.
    DPathStable { k: usize },
}

impl TerminationCriterion {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            TerminationCriterion::EpsilonDeltaD { epsilon } => {
                if epsilon > 0.0 && epsilon.is_finite() {
                    Ok(())
                } else {
                    Err(format!(
                        "epsilon must be positive and finite, got {epsilon}"
                    ))
                }
            }
            TerminationCriterion::DPathStable { k } => {
                if k >= 1 {
                    Ok(())
                } else {
                    Err("k must be at least 1".into())
                }
            }
        }
    }

    /// Accepts `eps=<real>` or `k=<int>`.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let (name, value) = spec.split_once('=').ok_or_else(|| {
            format!("criterion {spec:?} is not of the form eps=<real> or k=<int>")
        })?;
        let criterion = match name.trim() {
            "eps" => TerminationCriterion::EpsilonDeltaD {
                epsilon: value
                    .trim()
                    .parse()
                    .map_err(|_| format!("cannot parse epsilon from {value:?}"))?,
            },
            "k" => TerminationCriterion::DPathStable {
                k: value
                    .trim()
                    .parse()
                    .map_err(|_| format!("cannot parse k from {value:?}"))?,
            },
            other => return Err(format!("unknown criterion {other:?}")),
        };
        criterion.validate()?;
        Ok(criterion)
    }

    pub fn label(&self) -> String {
        match *self {
            TerminationCriterion::EpsilonDeltaD { epsilon } => format!("eps={epsilon}"),
            TerminationCriterion::DPathStable { k } => format!("k={k}"),
        }
    }

    pub fn fires(&self, trace: &[TraceEntry]) -> bool {
        match *self {
            TerminationCriterion::EpsilonDeltaD { epsilon } => trace
                .last()
                .is_some_and(|entry| criterion_epsilon_delta_d(entry, epsilon)),
            TerminationCriterion::DPathStable { k } => criterion_dpath_stable(trace, k),
        }
    }
}

impl std::fmt::Display for TerminationCriterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Classical stopping rule: total conductivity change of the latest
/// iteration at or below `epsilon`.
pub fn criterion_epsilon_delta_d(entry: &TraceEntry, epsilon: f64) -> bool {
    entry.sum_abs_delta_d <= epsilon
}

/// Dominant-path stability: the last `k + 1` trace entries all carry the
/// same node sequence. An extraction failure anywhere in that window resets
/// the count, so the rule cannot fire across one.
pub fn criterion_dpath_stable(trace: &[TraceEntry], k: usize) -> bool {
    if trace.len() < k + 1 {
        return false;
    }
    let window = &trace[trace.len() - (k + 1)..];
    let Some(reference) = window[0].dpath.as_ref() else {
        return false;
    };
    window[1..].iter().all(|entry| {
        entry
            .dpath
            .as_ref()
            .is_some_and(|p| p.nodes() == reference.nodes())
    })
}

/// Transition-point detection result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TPointResult {
    /// Earliest iteration from which the dominant-path length equals the
    /// optimal length at every recorded iteration; absent if the trace never
    /// settles on the optimum.
    pub tpoint_iteration: Option<usize>,
    /// Whether the trace extends at least `min_window` iterations past the
    /// transition point.
    pub confirmed: bool,
}

/// Finds the transition point of a trace against the oracle length.
/// Lengths are compared exactly (integer-valued weights sum exactly).
pub fn detect_tpoint(trace: &[TraceEntry], optimal_length: f64, min_window: usize) -> TPointResult {
    assert!(min_window >= 1, "window must be at least 1");
    let mut start: Option<usize> = None;
    for entry in trace.iter().rev() {
        match entry.dpath.as_ref() {
            Some(p) if p.length() == optimal_length => start = Some(entry.iteration),
            _ => break,
        }
    }
    match (start, trace.last()) {
        (Some(iteration), Some(last)) => TPointResult {
            tpoint_iteration: Some(iteration),
            confirmed: last.iteration - iteration >= min_window,
        },
        _ => TPointResult {
            tpoint_iteration: None,
            confirmed: false,
        },
    }
}
