//! Maximum-entropy solver on the convex dual.
//!
//! The reconstruction `σ* = exp(−Σ λ*_i O_i) / Z` minimizes
//! `D(λ) = log Z(λ) + Σ λ_i c_i`, whose gradient is the constraint mismatch
//! `c_i − ⟨O_i⟩_σ(λ)`. Every iterate is a valid Boltzmann state, so feasibility
//! of the form holds throughout and only the moment matching is iterative.
//!
//! Pure targets have their optimum at `‖λ‖ → ∞`. The solver stops either at
//! the requested residual or once `‖λ‖∞` passes `lambda_cap`, and reports
//! `‖λ‖∞` as `effective_beta`.

mod dual;
pub mod lbfgs;
mod sweep;

pub use dual::{dual_objective, evaluate_dual, ConstraintFamily, DenseConstraints, DualPoint};
pub use lbfgs::StopReason;
pub use sweep::{is_monotone, reconstruction_entropy_sweep, SweepEntry};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::von_neumann_entropy;
use crate::marginals::marginal_error;
use crate::{Error, Result};
use lbfgs::{minimize, Evaluation, LbfgsOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target `max_i |c_i − ⟨O_i⟩|`.
    pub tolerance_eps: f64,
    pub max_iterations: usize,
    pub lambda_cap: f64,
    pub history_size: usize,
    /// Reserved; the solver is deterministic.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance_eps: 1e-8, max_iterations: 5000, lambda_cap: 200.0, history_size: 10, seed: 0 }
    }
}

impl SolverOptions {
    pub fn with_tolerance(mut self, eps: f64) -> Self {
        self.tolerance_eps = eps;
        self
    }

    pub(crate) fn lbfgs(&self) -> Result<LbfgsOptions> {
        if !(self.tolerance_eps > 0.0) {
            return Err(Error::Domain(format!("tolerance {} must be positive", self.tolerance_eps)));
        }
        if !(self.lambda_cap > 0.0) {
            return Err(Error::Domain(format!("lambda cap {} must be positive", self.lambda_cap)));
        }
        Ok(LbfgsOptions {
            tolerance: self.tolerance_eps,
            max_iterations: self.max_iterations,
            x_cap: self.lambda_cap,
            history: self.history_size,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub dual_point: DualPoint,
    pub iterations: usize,
    /// Largest trace distance between σ's marginals and the target marginals;
    /// `None` when the constraint family carries no regions.
    pub final_marginal_error: Option<f64>,
    pub final_constraint_residual: f64,
    /// `S(σ)` in nats.
    pub s_rec: f64,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// `‖λ‖∞`.
    pub effective_beta: f64,
    pub objective_trace: Vec<f64>,
}

/// Minimizes the dual from `λ = 0` with L-BFGS.
pub fn solve<F: ConstraintFamily + ?Sized>(family: &F, options: &SolverOptions) -> Result<SolveReport> {
    let lbfgs = options.lbfgs()?;
    let start = vec![0.0; family.targets().len()];
    let run = minimize(start, &lbfgs, |lambdas| {
        let point = evaluate_dual(family, lambdas)?;
        Ok(Evaluation { value: point.objective, gradient: point.gradient.clone(), payload: point })
    })?;
    let point = run.best.payload;
    let final_marginal_error = match family.marginal_targets() {
        Some(targets) => Some(marginal_error(&point.sigma, &targets?)?),
        None => None,
    };
    let residual = point.residual();
    Ok(SolveReport {
        s_rec: von_neumann_entropy(&point.sigma),
        effective_beta: lbfgs::max_abs(&point.lambdas),
        final_constraint_residual: residual,
        converged: residual <= options.tolerance_eps,
        stop_reason: run.stop,
        iterations: run.iterations,
        objective_trace: run.objective_trace,
        final_marginal_error,
        dual_point: point,
    })
}
