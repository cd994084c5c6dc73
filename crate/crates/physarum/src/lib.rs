//! Physarum polycephalum shortest-path solver.
//!
//! The solver treats a weighted graph as a network of tubes carrying a unit
//! inflow from source to sink. Each iteration solves the flux-balance
//! equations for node pressures, derives per-edge fluxes, and adapts each
//! edge's conductivity toward its flux magnitude; conductivity concentrates
//! on the shortest route and the rest of the network dies off.
//!
//! On top of the engine this crate provides:
//!
//! - dominant-path extraction (greedy max-|flux| walk) and the
//!   path-stability termination rule built on it;
//! - the classical conductivity-change stopping rule;
//! - transition-point detection: the iteration from which the dominant-path
//!   length permanently equals the true shortest-path length;
//! - graph generators (complete, Watts-Strogatz), edge-list and TNTP
//!   parsers, and a Dijkstra oracle;
//! - an experiment harness with seeded, reproducible criterion sweeps and
//!   CSV/JSON/JSONL reports.

pub mod dijkstra;
pub mod dpath;
pub mod edgelist;
pub mod engine;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod laplacian;
pub mod report;
pub mod rng;
pub mod tntp;

pub use dijkstra::dijkstra;
pub use dpath::{
    criterion_dpath_stable, criterion_epsilon_delta_d, detect_tpoint, extract_dpath,
    DPathExtractionFailed, TPointResult, TerminationCriterion, DEFAULT_TPOINT_WINDOW,
};
pub use edgelist::{emit_edge_list, parse_edge_list};
pub use engine::{
    compute_flux, flux_balance_residual, init_state, run, step, update_conductivity, EngineError,
    RunRecord, SolverConfig, SolverState, TerminatedBy, TraceEntry,
};
pub use generate::{gen_complete, gen_small_world};
pub use graph::{build_graph, Edge, Graph, GraphError, NodeId, Path};
pub use harness::{
    run_success_suite, run_tpoint_eval, CaseResult, HarnessError, Outcome, SuccessCell,
    SuccessTable, SuiteResult, SuiteSpec, TPointReport, TPointRun,
};
pub use laplacian::{
    assemble_grounded_system, balance_residual, solve_pressures, solve_pressures_checked,
    GroundedSystem, SolveError,
};
pub use report::{emit_report, write_atomic, Report, ReportError, ReportFormat};
pub use rng::SplitMix64;
pub use tntp::{parse_tntp, TntpOptions, TntpStats, WeightColumn};
