//! Pressure solve: the network Poisson equation.
//!
//! Every node balances its flux: sum_i g_ij (p_i - p_j) equals +IN0 at the
//! source, -IN0 at the sink, and 0 elsewhere, with conductances
//! g_ij = D_ij / L_ij. The source node is grounded at p = 0, which makes the
//! remaining (n-1)-dimensional system symmetric positive definite whenever
//! the graph is connected and all conductivities are positive.
//!
//! The assembled matrix is the grounded weighted Laplacian (positive
//! diagonal, non-positive off-diagonals); the balance equations themselves
//! are its negation, so the solve applies the factorization to the negated
//! right-hand side. No conductivity clamping happens here: a collapsed
//! (~zero) conductivity that breaks positive definiteness or the residual
//! contract surfaces as [`SolveError::SolveFailed`].

use crate::graph::{Graph, NodeId};
use thiserror::Error;

/// Unknown counts up to this size use a dense Cholesky factorization;
/// larger systems switch to Jacobi-preconditioned conjugate gradients.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("conductivity at edge index {index} is {value}, not positive and finite")]
    NonFiniteConductivity { index: usize, value: f64 },
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
}

/// The grounded pressure system.
///
/// Unknowns are the non-grounded nodes in ascending id order. `matrix` is
/// the grounded weighted Laplacian (row-major, symmetric positive definite);
/// `rhs` holds the source terms of the balance equations with the grounded
/// row omitted: -IN0 at the sink's row, 0 elsewhere.
#[derive(Debug, Clone)]
pub struct GroundedSystem {
    pub dimension: usize,
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
    pub grounded_node: NodeId,
}

impl GroundedSystem {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dimension + col]
    }
}

/// Index of a node among the unknowns (all nodes except `grounded`).
fn unknown_index(node: NodeId, grounded: NodeId) -> Option<usize> {
    match node.cmp(&grounded) {
        std::cmp::Ordering::Less => Some(node - 1),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(node - 2),
    }
}

fn validate_conductivities(g: &Graph, conductivities: &[f64]) -> Result<(), SolveError> {
    assert_eq!(
        conductivities.len(),
        g.edge_count(),
        "one conductivity per edge"
    );
    for (index, &value) in conductivities.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(SolveError::NonFiniteConductivity { index, value });
        }
    }
    Ok(())
}

/// Assembles the grounded system for the given per-edge conductivities,
/// grounding the source node at pressure 0.
pub fn assemble_grounded_system(
    g: &Graph,
    conductivities: &[f64],
    in0: f64,
) -> Result<GroundedSystem, SolveError> {
    validate_conductivities(g, conductivities)?;
    let grounded = g.source();
    let dim = g.node_count() - 1;
    let mut matrix = vec![0.0; dim * dim];
    let mut rhs = vec![0.0; dim];

    for (idx, e) in g.edges().iter().enumerate() {
        let cond = conductivities[idx] / e.weight;
        let iu = unknown_index(e.u, grounded);
        let iv = unknown_index(e.v, grounded);
        if let Some(i) = iu {
            matrix[i * dim + i] += cond;
        }
        if let Some(j) = iv {
            matrix[j * dim + j] += cond;
        }
        if let (Some(i), Some(j)) = (iu, iv) {
            matrix[i * dim + j] -= cond;
            matrix[j * dim + i] -= cond;
        }
    }
    if let Some(j) = unknown_index(g.sink(), grounded) {
        rhs[j] = -in0;
    }
    Ok(GroundedSystem {
        dimension: dim,
        matrix,
        rhs,
        grounded_node: grounded,
    })
}

/// Solves for all node pressures. Entry `node - 1` of the result is the
/// pressure of `node`; the grounded source is exactly 0.
///
/// The returned vector satisfies the balance equation at every node to
/// within `tolerance * max(1, IN0)` in the max norm, or the call fails.
pub fn solve_pressures(
    g: &Graph,
    conductivities: &[f64],
    in0: f64,
    tolerance: f64,
) -> Result<Vec<f64>, SolveError> {
    solve_pressures_checked(g, conductivities, in0, tolerance).map(|(p, _)| p)
}

/// As [`solve_pressures`], also returning the achieved max-norm residual.
pub fn solve_pressures_checked(
    g: &Graph,
    conductivities: &[f64],
    in0: f64,
    tolerance: f64,
) -> Result<(Vec<f64>, f64), SolveError> {
    assert!(in0 > 0.0 && in0.is_finite(), "IN0 must be positive");
    assert!(tolerance > 0.0, "tolerance must be positive");
    validate_conductivities(g, conductivities)?;

    let grounded = g.source();
    let dim = g.node_count() - 1;
    let bound = tolerance * in0.max(1.0);

    let x = if dim <= DIRECT_SOLVE_LIMIT {
        let system = assemble_grounded_system(g, conductivities, in0)?;
        // The balance equations are the negated Laplacian rows.
        let b: Vec<f64> = system.rhs.iter().map(|v| -v).collect();
        cholesky_solve(&system, &b)?
    } else {
        let b = negated_rhs(g, in0);
        conjugate_gradient(g, conductivities, grounded, &b, 0.5 * bound)?
    };

    let mut pressures = vec![0.0; g.node_count()];
    for node in 1..=g.node_count() {
        if let Some(i) = unknown_index(node, grounded) {
            pressures[node - 1] = x[i];
        }
    }
    if pressures.iter().any(|p| !p.is_finite()) {
        return Err(SolveError::SolveFailed("non-finite pressure".into()));
    }

    let residual = balance_residual(g, conductivities, &pressures, in0);
    if residual.is_nan() || residual > bound {
        return Err(SolveError::SolveFailed(format!(
            "residual {residual:e} exceeds bound {bound:e}"
        )));
    }
    Ok((pressures, residual))
}

/// Max-norm residual of the balance equations for a full pressure vector.
pub fn balance_residual(g: &Graph, conductivities: &[f64], pressures: &[f64], in0: f64) -> f64 {
    let mut net = vec![0.0; g.node_count() + 1];
    for (idx, e) in g.edges().iter().enumerate() {
        let flow = conductivities[idx] / e.weight * (pressures[e.u - 1] - pressures[e.v - 1]);
        net[e.v] += flow;
        net[e.u] -= flow;
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

fn negated_rhs(g: &Graph, in0: f64) -> Vec<f64> {
    let mut b = vec![0.0; g.node_count() - 1];
    if let Some(j) = unknown_index(g.sink(), g.source()) {
        b[j] = in0;
    }
    b
}

/// Dense Cholesky (LL^T) solve of `system.matrix * x = b`.
fn cholesky_solve(system: &GroundedSystem, b: &[f64]) -> Result<Vec<f64>, SolveError> {
    let n = system.dimension;
    let mut l = system.matrix.clone();
    for k in 0..n {
        let mut pivot = l[k * n + k];
        for j in 0..k {
            pivot -= l[k * n + j] * l[k * n + j];
        }
        if !pivot.is_finite() || pivot <= 0.0 {
            return Err(SolveError::SolveFailed(format!(
                "matrix not positive definite at row {k} (pivot {pivot:e})"
            )));
        }
        let diag = pivot.sqrt();
        l[k * n + k] = diag;
        for i in (k + 1)..n {
            let mut sum = l[i * n + k];
            for j in 0..k {
                sum -= l[i * n + j] * l[k * n + j];
            }
            l[i * n + k] = sum / diag;
        }
    }
    // forward: L y = b
    let mut x = b.to_vec();
    for i in 0..n {
        for j in 0..i {
            x[i] -= l[i * n + j] * x[j];
        }
        x[i] /= l[i * n + i];
    }
    // backward: L^T x = y
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            x[i] -= l[j * n + i] * x[j];
        }
        x[i] /= l[i * n + i];
    }
    Ok(x)
}

/// Jacobi-preconditioned conjugate gradients on the grounded Laplacian,
/// applied matrix-free over the edge list.
fn conjugate_gradient(
    g: &Graph,
    conductivities: &[f64],
    grounded: NodeId,
    b: &[f64],
    target: f64,
) -> Result<Vec<f64>, SolveError> {
    let dim = g.node_count() - 1;
    let mut diag = vec![0.0; dim];
    for (idx, e) in g.edges().iter().enumerate() {
        let cond = conductivities[idx] / e.weight;
        if let Some(i) = unknown_index(e.u, grounded) {
            diag[i] += cond;
        }
        if let Some(j) = unknown_index(e.v, grounded) {
            diag[j] += cond;
        }
    }
    if diag.iter().any(|&d| d.is_nan() || d <= 0.0) {
        return Err(SolveError::SolveFailed(
            "isolated node: zero diagonal in grounded system".into(),
        ));
    }

    let apply = |x: &[f64], y: &mut [f64]| {
        for (yi, (&xi, &di)) in y.iter_mut().zip(x.iter().zip(diag.iter())) {
            *yi = xi * di;
        }
        for (idx, e) in g.edges().iter().enumerate() {
            let cond = conductivities[idx] / e.weight;
            if let (Some(i), Some(j)) = (unknown_index(e.u, grounded), unknown_index(e.v, grounded))
            {
                y[i] -= cond * x[j];
                y[j] -= cond * x[i];
            }
        }
    };

    let mut x = vec![0.0; dim];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag.iter()).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; dim];

    let max_iterations = 20 * dim + 100;
    for _ in 0..max_iterations {
        let inf: f64 = r.iter().fold(0.0, |m, v| m.max(v.abs()));
        if inf <= target {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(ap.iter()).map(|(a, b)| a * b).sum();
        if !pap.is_finite() || pap <= 0.0 {
            return Err(SolveError::SolveFailed(format!(
                "conjugate gradient broke down (p^T A p = {pap:e})"
            )));
        }
        let alpha = rz / pap;
        for i in 0..dim {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..dim {
            z[i] = r[i] / diag[i];
        }
        let rz_next: f64 = r.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..dim {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(SolveError::SolveFailed(format!(
        "conjugate gradient did not reach {target:e} in {max_iterations} iterations"
    )))
}
