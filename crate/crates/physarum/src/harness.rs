//! Experiment harness: termination-criterion sweeps over randomly generated
//! complete graphs with success-rate accounting, and the transition-point
//! evaluation protocol that measures convergence while excluding the effect
//! of the termination criterion.

use crate::dijkstra::dijkstra;
use crate::dpath::TerminationCriterion;
use crate::engine::{self, EngineError, SolverConfig, TerminatedBy};
use crate::generate::gen_complete;
use crate::graph::{Graph, GraphError};
use crate::rng::derive_seed;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("t-point unconfirmed: iteration budget {budget} ended inside the {window}-iteration confirmation window")]
    Unconfirmed { budget: usize, window: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid suite: {0}")]
    InvalidSuite(String),
}

/// A criterion-comparison sweep: for every size, `graphs_per_size` complete
/// graphs are generated and every criterion runs on every graph.
#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub sizes: Vec<usize>,
    pub graphs_per_size: usize,
    pub criteria: Vec<TerminationCriterion>,
    /// Master seed; graph `i` (counted size-major) uses the child stream
    /// `derive_seed(seed, i)`.
    pub seed: u64,
    pub weight_min: u64,
    pub weight_max: u64,
    /// Engine settings; `max_iterations` is the run budget.
    pub engine: SolverConfig,
    /// Worker threads; 0 uses all cores, 1 runs sequentially. The output is
    /// identical for any value.
    pub jobs: usize,
}

impl SuiteSpec {
    pub fn new(
        sizes: Vec<usize>,
        graphs_per_size: usize,
        criteria: Vec<TerminationCriterion>,
        seed: u64,
        budget: usize,
    ) -> Self {
        Self {
            sizes,
            graphs_per_size,
            criteria,
            seed,
            weight_min: 1,
            weight_max: 10_000,
            engine: SolverConfig {
                max_iterations: budget,
                ..Default::default()
            },
            jobs: 0,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.sizes.is_empty() {
            return Err(HarnessError::InvalidSuite("no sizes given".into()));
        }
        if self.graphs_per_size < 1 {
            return Err(HarnessError::InvalidSuite(
                "graphs per size must be >= 1".into(),
            ));
        }
        if self.criteria.is_empty() {
            return Err(HarnessError::InvalidSuite("no criteria given".into()));
        }
        for c in &self.criteria {
            c.validate().map_err(HarnessError::InvalidSuite)?;
        }
        self.engine.validate()?;
        Ok(())
    }
}

/// How a single run ended, as counted by the success tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// Criterion fired and the final dominant-path length equals the
    /// shortest-path length.
    Success,
    /// Criterion fired on a non-optimal path.
    WrongPath,
    /// The budget ran out before the criterion fired.
    BudgetExhausted,
    /// The pressure solve failed (numerically collapsed conductivities).
    SolverFailure,
}

/// One (graph, criterion) run of the suite.
#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub graph_id: String,
    pub size: usize,
    pub graph_index: usize,
    pub graph_seed: u64,
    pub criterion: String,
    pub outcome: Outcome,
    pub iterations_used: usize,
    pub final_length: Option<f64>,
    pub oracle_length: f64,
    pub wall_time_s: f64,
    /// Largest per-node flux-balance residual over the run's iterations.
    pub max_flux_residual: f64,
    /// Smallest conductivity over the run's iterations.
    pub min_conductivity: f64,
}

/// Aggregates for one (size, criterion) cell.
#[derive(Debug, Clone, Serialize)]
pub struct SuccessCell {
    pub size: usize,
    pub criterion: String,
    pub total: usize,
    pub successes: usize,
    /// Runs that terminated on a wrong path or failed numerically.
    pub failed_count: usize,
    /// Runs that never reached the criterion within the budget.
    pub budget_exhausted_count: usize,
    pub success_rate: f64,
    /// Mean wall time (seconds) over successful runs only.
    pub mean_time_s: Option<f64>,
    /// Mean iteration count over successful runs only.
    pub mean_iterations: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuccessTable {
    pub cells: Vec<SuccessCell>,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub table: SuccessTable,
    pub cases: Vec<CaseResult>,
}

/// Runs the sweep. Cells execute in parallel (`spec.jobs` threads); results
/// are merged in (size, criterion, graph index) order regardless of
/// completion order, so the output is deterministic for a fixed seed.
pub fn run_success_suite(spec: &SuiteSpec) -> Result<SuiteResult, HarnessError> {
    spec.validate()?;

    // Graphs are shared by every criterion and generated up front.
    let mut graphs: Vec<(usize, usize, u64, Graph, f64)> = Vec::new();
    for (si, &size) in spec.sizes.iter().enumerate() {
        for gi in 0..spec.graphs_per_size {
            let lane = (si * spec.graphs_per_size + gi) as u64;
            let graph_seed = derive_seed(spec.seed, lane);
            let g = gen_complete(size, spec.weight_min, spec.weight_max, graph_seed)?;
            let oracle = dijkstra(&g).length();
            graphs.push((si, gi, graph_seed, g, oracle));
        }
    }

    // Work items in deterministic output order: size-major, then criterion,
    // then graph index.
    let mut items: Vec<(usize, usize, usize)> = Vec::new(); // (graph slot, ci, gi)
    for si in 0..spec.sizes.len() {
        for ci in 0..spec.criteria.len() {
            for gi in 0..spec.graphs_per_size {
                items.push((si * spec.graphs_per_size + gi, ci, gi));
            }
        }
    }

    let run_case = |&(slot, ci, gi): &(usize, usize, usize)| -> CaseResult {
        let (_, _, graph_seed, ref g, oracle) = graphs[slot];
        let size = g.node_count();
        let criterion = &spec.criteria[ci];
        let started = Instant::now();
        let outcome_record = engine::run(g, &spec.engine, criterion);
        let wall_time_s = started.elapsed().as_secs_f64();
        let (outcome, iterations_used, final_length, max_flux_residual, min_conductivity) =
            match outcome_record {
                Err(_) => (Outcome::SolverFailure, 0, None, f64::INFINITY, 0.0),
                Ok(record) => {
                    let final_length = record.final_length();
                    let outcome = match record.terminated_by {
                        TerminatedBy::Budget => Outcome::BudgetExhausted,
                        TerminatedBy::Criterion if final_length == Some(oracle) => Outcome::Success,
                        TerminatedBy::Criterion => Outcome::WrongPath,
                    };
                    (
                        outcome,
                        record.iterations_used,
                        final_length,
                        record.max_flux_residual,
                        record.min_conductivity,
                    )
                }
            };
        CaseResult {
            graph_id: format!("complete-n{size}-i{gi:03}"),
            size,
            graph_index: gi,
            graph_seed,
            criterion: criterion.label(),
            outcome,
            iterations_used,
            final_length,
            oracle_length: oracle,
            wall_time_s,
            max_flux_residual,
            min_conductivity,
        }
    };

    let cases: Vec<CaseResult> = if spec.jobs == 1 {
        items.iter().map(run_case).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| HarnessError::InvalidSuite(format!("thread pool: {e}")))?;
        pool.install(|| items.par_iter().map(run_case).collect())
    };

    // Aggregate per (size, criterion) in input order; cases are already
    // grouped that way.
    let mut cells = Vec::new();
    let per_cell = spec.graphs_per_size;
    for (cell_idx, chunk) in cases.chunks(per_cell).enumerate() {
        let si = cell_idx / spec.criteria.len();
        let ci = cell_idx % spec.criteria.len();
        let mut successes = 0;
        let mut failed = 0;
        let mut budget = 0;
        let mut time_sum = 0.0;
        let mut iter_sum = 0usize;
        for case in chunk {
            match case.outcome {
                Outcome::Success => {
                    successes += 1;
                    time_sum += case.wall_time_s;
                    iter_sum += case.iterations_used;
                }
                Outcome::WrongPath | Outcome::SolverFailure => failed += 1,
                Outcome::BudgetExhausted => budget += 1,
            }
        }
        cells.push(SuccessCell {
            size: spec.sizes[si],
            criterion: spec.criteria[ci].label(),
            total: chunk.len(),
            successes,
            failed_count: failed,
            budget_exhausted_count: budget,
            success_rate: successes as f64 / chunk.len() as f64,
            mean_time_s: (successes > 0).then(|| time_sum / successes as f64),
            mean_iterations: (successes > 0).then(|| iter_sum as f64 / successes as f64),
        });
    }

    Ok(SuiteResult {
        table: SuccessTable { cells },
        cases,
    })
}

/// One repeat of the transition-point protocol.
#[derive(Debug, Clone, Serialize)]
pub struct TPointRun {
    pub repeat: usize,
    /// First iteration of the permanent match with the oracle length.
    pub tpoint_iteration: usize,
    /// Wall time from run start until that match was first observed.
    pub time_to_tpoint_s: f64,
    /// The match held for the whole confirmation window.
    pub confirmed: bool,
    /// First iteration at which the attached criterion would have fired;
    /// informational, the protocol does not stop there.
    pub criterion_fired_at: Option<usize>,
    pub iterations_executed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TPointReport {
    pub oracle_length: f64,
    pub min_window: usize,
    pub criterion: String,
    pub runs: Vec<TPointRun>,
}

/// Transition-point evaluation.
///
/// Protocol: compute the shortest path first; then iterate the engine,
/// comparing each iteration's dominant-path length to it. When they first
/// match, record the running time and keep iterating; if the match survives
/// `min_window` further iterations the transition point is confirmed,
/// otherwise the watch restarts. The attached criterion is evaluated for
/// bookkeeping but never stops the protocol, so runs under different
/// criteria execute the same iteration sequence.
pub fn run_tpoint_eval(
    g: &Graph,
    config: &SolverConfig,
    criterion: &TerminationCriterion,
    repeats: usize,
    min_window: usize,
) -> Result<TPointReport, HarnessError> {
    if repeats < 1 {
        return Err(HarnessError::InvalidSuite("repeats must be >= 1".into()));
    }
    if min_window < 1 {
        return Err(HarnessError::InvalidSuite("window must be >= 1".into()));
    }
    config.validate()?;
    criterion
        .validate()
        .map_err(|e| HarnessError::Engine(EngineError::InvalidConfig(e)))?;

    let oracle_length = dijkstra(g).length();
    let mut runs = Vec::with_capacity(repeats);
    for repeat in 0..repeats {
        runs.push(tpoint_protocol(
            g,
            config,
            criterion,
            oracle_length,
            min_window,
            repeat,
        )?);
    }
    Ok(TPointReport {
        oracle_length,
        min_window,
        criterion: criterion.label(),
        runs,
    })
}

fn tpoint_protocol(
    g: &Graph,
    config: &SolverConfig,
    criterion: &TerminationCriterion,
    oracle_length: f64,
    min_window: usize,
    repeat: usize,
) -> Result<TPointRun, HarnessError> {
    let started = Instant::now();
    let mut state = engine::init_state(g, config);
    let mut trace = Vec::new();
    let mut watch: Option<(usize, f64)> = None; // (iteration, running time at match)
    let mut criterion_fired_at = None;

    for i in 1..=config.max_iterations {
        let entry = engine::step(g, &mut state, config).map_err(EngineError::from)?;
        let matches = entry
            .dpath
            .as_ref()
            .is_some_and(|p| p.length() == oracle_length);
        trace.push(entry);
        if matches {
            if watch.is_none() {
                watch = Some((i, started.elapsed().as_secs_f64()));
            }
        } else {
            watch = None; // back to step ii: the watch restarts
        }
        if criterion_fired_at.is_none() && criterion.fires(&trace) {
            criterion_fired_at = Some(i);
        }
        if let Some((tpoint, time_s)) = watch {
            if i - tpoint >= min_window {
                return Ok(TPointRun {
                    repeat,
                    tpoint_iteration: tpoint,
                    time_to_tpoint_s: time_s,
                    confirmed: true,
                    criterion_fired_at,
                    iterations_executed: i,
                });
            }
        }
    }
    Err(HarnessError::Unconfirmed {
        budget: config.max_iterations,
        window: min_window,
    })
}
