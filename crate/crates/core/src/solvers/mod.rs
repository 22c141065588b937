//! Preconditioned Krylov solvers sharing one report format.

mod minres;
mod precond;
mod sqmr;

pub use minres::minres_solve;
pub use precond::{Frame, IdentityPreconditioner, LdlPreconditioner};
pub use sqmr::sqmr_solve;

use serde::{Deserialize, Serialize};

use crate::error::{IldlError, Result};
use crate::storage::{SparseSymStore, SymmetryKind};

/// Breakdown floor for the scalar recurrences.
pub const BREAKDOWN_TOL: f64 = 1e-30;
/// The true residual `b - A x` is recomputed this often.
pub const RESIDUAL_REFRESH: usize = 10;

pub trait LinearOperator {
    fn n(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn kind(&self) -> SymmetryKind {
        SymmetryKind::Symmetric
    }
}

impl LinearOperator for SparseSymStore {
    fn n(&self) -> usize {
        SparseSymStore::n(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y)
    }

    fn kind(&self) -> SymmetryKind {
        SparseSymStore::kind(self)
    }
}

/// Approximates `A^{-1}`.
pub trait Preconditioner {
    fn n(&self) -> usize;
    /// `z = M^{-1} r`
    fn apply(&self, r: &[f64], z: &mut [f64]);
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[default]
    Sqmr,
    Minres,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub rtol: f64,
    pub max_iter: usize,
    pub kind: SolverKind,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            rtol: 1e-6,
            max_iter: 1000,
            kind: SolverKind::Sqmr,
        }
    }
}

impl SolverParams {
    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0) {
            return Err(IldlError::InvalidParameter(format!("rtol must be positive, got {}", self.rtol)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIter,
    Breakdown,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::Breakdown => "breakdown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub iterations: usize,
    /// Final `||b - A x|| / ||b||`, recomputed from the returned iterate.
    pub relres: f64,
    /// `||b - A x_k|| / ||b||` for `k = 0, 1, ...`.
    pub relres_history: Vec<f64>,
    /// Name of the iteration that produced the result.
    pub method: String,
    pub fill: Option<f64>,
    pub precond_seconds: f64,
    pub solve_seconds: f64,
}

/// Solves with the method selected in `params`.
pub fn solve(
    a: &dyn LinearOperator,
    m: &dyn Preconditioner,
    b: &[f64],
    params: &SolverParams,
) -> Result<(Vec<f64>, SolveReport)> {
    match params.kind {
        SolverKind::Sqmr => sqmr_solve(a, m, b, params),
        SolverKind::Minres => minres_solve(a, m, b, params),
    }
}

pub(crate) fn check_dims(a: &dyn LinearOperator, m: &dyn Preconditioner, b: &[f64]) -> Result<()> {
    if a.n() != b.len() {
        return Err(IldlError::DimensionMismatch { expected: a.n(), got: b.len() });
    }
    if m.n() != b.len() {
        return Err(IldlError::DimensionMismatch { expected: b.len(), got: m.n() });
    }
    Ok(())
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn true_residual(a: &dyn LinearOperator, b: &[f64], x: &[f64], out: &mut [f64]) -> Result<()> {
    a.apply(x, out);
    for (o, bi) in out.iter_mut().zip(b) {
        *o = bi - *o;
    }
    if out.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(IldlError::NonFinite("operator"))
    }
}

fn finished(status: SolveStatus, history: Vec<f64>, relres: f64, method: &str, start: std::time::Instant) -> SolveReport {
    SolveReport {
        status,
        iterations: history.len() - 1,
        relres,
        relres_history: history,
        method: method.to_string(),
        fill: None,
        precond_seconds: 0.0,
        solve_seconds: start.elapsed().as_secs_f64(),
    }
}
