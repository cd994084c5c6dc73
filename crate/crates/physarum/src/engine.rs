//! The solver iteration loop: grounded pressure solve, Hagen-Poiseuille
//! flux, conductivity adaptation, dominant-path trace, pluggable
//! termination.
//!
//! Each iteration solves the balance equations for the current
//! conductivities, computes the per-edge flux Q_uv = D_uv / L_uv (p_u -
//! p_v), then relaxes every conductivity toward its flux magnitude:
//! D' = (D + dt |Q|) / (1 + dt), which at the default dt = 1 is the midpoint
//! (|Q| + D) / 2. Edges on dominant routes thicken, the rest decay toward
//! zero.

use crate::dpath::{extract_dpath, TerminationCriterion};
use crate::graph::{Graph, Path};
use crate::laplacian::{solve_pressures_checked, SolveError};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Engine parameters.
///
/// The conductivity decay coefficient `alpha` and the flux response are
/// fixed to 1 and the identity in this solver; `validate` rejects any other
/// `alpha` so configs stay honest about what the engine computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Inflow magnitude driving the network.
    pub in0: f64,
    /// Time step of the conductivity update.
    pub delta_t: f64,
    /// Decay coefficient; must be 1.
    pub alpha: f64,
    /// Initial conductivity of every edge.
    pub initial_d: f64,
    /// Max-norm residual bound for the pressure solve, relative to max(1, IN0).
    pub linear_tolerance: f64,
    /// Iteration budget.
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            in0: 1.0,
            delta_t: 1.0,
            alpha: 1.0,
            initial_d: 0.5,
            linear_tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |msg: String| Err(EngineError::InvalidConfig(msg));
        if !(self.in0 > 0.0 && self.in0.is_finite()) {
            return bad(format!("IN0 must be positive and finite, got {}", self.in0));
        }
        if !(self.delta_t > 0.0 && self.delta_t.is_finite()) {
            return bad(format!("delta_t must be positive, got {}", self.delta_t));
        }
        if self.alpha != 1.0 {
            return bad(format!(
                "alpha is fixed at 1 in this solver, got {}",
                self.alpha
            ));
        }
        if !(self.initial_d > 0.0 && self.initial_d.is_finite()) {
            return bad(format!(
                "initial conductivity must be positive, got {}",
                self.initial_d
            ));
        }
        if self.linear_tolerance.is_nan() || self.linear_tolerance <= 0.0 {
            return bad(format!(
                "linear tolerance must be positive, got {}",
                self.linear_tolerance
            ));
        }
        if self.max_iterations < 1 {
            return bad("iteration budget must be at least 1".into());
        }
        Ok(())
    }
}

/// Mutable solver state. Owned by one run at a time.
#[derive(Debug, Clone)]
pub struct SolverState {
    /// Per-edge conductivity D, indexed like `Graph::edges`.
    pub conductivities: Vec<f64>,
    /// Per-edge signed flux for the stored orientation u -> v (u < v).
    pub fluxes: Vec<f64>,
    /// Per-node pressure, entry `node - 1`.
    pub pressures: Vec<f64>,
    pub iteration: usize,
}

/// One iteration of the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    /// Dominant path of this iteration's fluxes; `None` when extraction
    /// failed (criteria treat that as "no stable path yet").
    pub dpath: Option<Path>,
    /// Total conductivity change of this iteration.
    pub sum_abs_delta_d: f64,
    /// Wall time of the iteration; informational only.
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminatedBy {
    Criterion,
    Budget,
}

impl TerminatedBy {
    pub fn label(self) -> &'static str {
        match self {
            TerminatedBy::Criterion => "criterion",
            TerminatedBy::Budget => "budget",
        }
    }
}

/// Everything a finished run reports.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config: SolverConfig,
    pub criterion: TerminationCriterion,
    pub iterations_used: usize,
    pub terminated_by: TerminatedBy,
    /// Dominant path of the last iteration.
    pub final_path: Option<Path>,
    pub wall_time: Duration,
    pub trace: Vec<TraceEntry>,
    /// Largest per-node flux-balance residual seen in any iteration.
    pub max_flux_residual: f64,
    /// Smallest conductivity seen in any iteration.
    pub min_conductivity: f64,
}

impl RunRecord {
    pub fn final_length(&self) -> Option<f64> {
        self.final_path.as_ref().map(|p| p.length())
    }
}

/// Fresh state: every conductivity at `initial_d`, fluxes and pressures
/// zero, iteration 0.
pub fn init_state(g: &Graph, config: &SolverConfig) -> SolverState {
    SolverState {
        conductivities: vec![config.initial_d; g.edge_count()],
        fluxes: vec![0.0; g.edge_count()],
        pressures: vec![0.0; g.node_count()],
        iteration: 0,
    }
}

/// Per-edge flux for the stored orientation: Q_uv = D_uv / L_uv (p_u - p_v).
pub fn compute_flux(g: &Graph, conductivities: &[f64], pressures: &[f64]) -> Vec<f64> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(idx, e)| conductivities[idx] / e.weight * (pressures[e.u - 1] - pressures[e.v - 1]))
        .collect()
}

/// Conductivity update D' = (D + dt |Q|) / (1 + dt); dt = 1 gives the
/// midpoint (|Q| + D) / 2. D' always lies between D and |Q|.
pub fn update_conductivity(conductivities: &[f64], fluxes: &[f64], delta_t: f64) -> Vec<f64> {
    conductivities
        .iter()
        .zip(fluxes.iter())
        .map(|(&d, &q)| (d + delta_t * q.abs()) / (1.0 + delta_t))
        .collect()
}

/// Max-norm residual of the flux-balance equations for a flux assignment:
/// net flux must be +IN0 at the source, -IN0 at the sink, 0 elsewhere.
pub fn flux_balance_residual(g: &Graph, fluxes: &[f64], in0: f64) -> f64 {
    let mut net = vec![0.0; g.node_count() + 1];
    for (idx, e) in g.edges().iter().enumerate() {
        net[e.v] += fluxes[idx];
        net[e.u] -= fluxes[idx];
    }
    let mut worst: f64 = 0.0;
    for (node, &inflow) in net.iter().enumerate().skip(1) {
        let target = if node == g.source() {
            in0
        } else if node == g.sink() {
            -in0
        } else {
            0.0
        };
        worst = worst.max((inflow - target).abs());
    }
    worst
}

/// Advances the state by one iteration: pressure solve, flux, conductivity
/// update, dominant-path extraction, in that order. The transition is a pure
/// function of (graph, state, config); wall time is the only thing that
/// varies between identical calls.
pub fn step(
    g: &Graph,
    state: &mut SolverState,
    config: &SolverConfig,
) -> Result<TraceEntry, SolveError> {
    let started = Instant::now();
    let (pressures, _residual) = solve_pressures_checked(
        g,
        &state.conductivities,
        config.in0,
        config.linear_tolerance,
    )?;
    let fluxes = compute_flux(g, &state.conductivities, &pressures);
    let next_d = update_conductivity(&state.conductivities, &fluxes, config.delta_t);
    let sum_abs_delta_d = next_d
        .iter()
        .zip(state.conductivities.iter())
        .map(|(a, b)| (a - b).abs())
        .sum();

    state.pressures = pressures;
    state.fluxes = fluxes;
    state.conductivities = next_d;
    state.iteration += 1;

    let dpath = extract_dpath(g, &state.fluxes).ok();
    Ok(TraceEntry {
        iteration: state.iteration,
        dpath,
        sum_abs_delta_d,
        elapsed: started.elapsed(),
    })
}

/// Runs the loop until the criterion fires or the budget is exhausted.
/// Budget exhaustion is a recorded outcome, not an error; a failed pressure
/// solve (numerically collapsed conductivities) is an error.
pub fn run(
    g: &Graph,
    config: &SolverConfig,
    criterion: &TerminationCriterion,
) -> Result<RunRecord, EngineError> {
    config.validate()?;
    criterion.validate().map_err(EngineError::InvalidConfig)?;

    let started = Instant::now();
    let mut state = init_state(g, config);
    let mut trace = Vec::new();
    let mut terminated_by = TerminatedBy::Budget;
    let mut max_flux_residual: f64 = 0.0;
    let mut min_conductivity = f64::INFINITY;

    for _ in 0..config.max_iterations {
        let entry = step(g, &mut state, config)?;
        max_flux_residual =
            max_flux_residual.max(flux_balance_residual(g, &state.fluxes, config.in0));
        min_conductivity = state
            .conductivities
            .iter()
            .fold(min_conductivity, |m, &d| m.min(d));
        trace.push(entry);
        if criterion.fires(&trace) {
            terminated_by = TerminatedBy::Criterion;
            break;
        }
    }

    Ok(RunRecord {
        config: *config,
        criterion: criterion.clone(),
        iterations_used: state.iteration,
        terminated_by,
        final_path: trace.last().and_then(|e| e.dpath.clone()),
        wall_time: started.elapsed(),
        trace,
        max_flux_residual,
        min_conductivity,
    })
}
