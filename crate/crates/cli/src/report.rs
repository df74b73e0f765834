//! JSON views of the core reports. Field names match the library's.

use maxent_core::certify::{CertificateReport, GroundBoundReport, ThermalProjectorReport, TopoBoundReport};
use maxent_core::fermion::GaussianFit;
use maxent_core::solver::SolveReport;
use serde_json::{json, Value};

pub fn certificate(r: &CertificateReport) -> Value {
    json!({
        "s_rec": r.s_rec,
        "s_rho": r.s_rho,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "slack": r.slack,
        "satisfied": r.satisfied,
        "distance_bound": r.distance_bound,
    })
}

pub fn ground_bounds(r: &GroundBoundReport) -> Value {
    json!({
        "kind": "ground",
        "eps": r.eps,
        "ground_energy": r.ground_energy,
        "energy_excess": r.energy_excess,
        "eps_bound": r.eps_bound,
        "gap": r.gap,
        "excited_weight": r.excited_weight,
        "excited_weight_bound": r.excited_weight_bound,
        "overlap_lower_bound": r.overlap_lower_bound,
        "energy_bound_holds": r.energy_bound_holds,
        "excited_bound_holds": r.excited_bound_holds,
        "holds": r.holds(),
    })
}

pub fn topo_bounds(r: &TopoBoundReport) -> Value {
    json!({
        "kind": "topological",
        "eps": r.eps,
        "n_ground": r.n_ground,
        "gap": r.gap,
        "local_dim": r.local_dim,
        "energy_excess": r.energy_excess,
        "p_high": r.p_high,
        "p_high_bound": r.p_high_bound,
        "p_high_eps_bound": r.p_high_eps_bound,
        "fannes_term": r.fannes_term,
        "final_bound": r.final_bound,
        "s_low": r.s_low,
        "log_n": r.log_n,
        "p_high_holds": r.p_high_holds,
        "eps_holds": r.eps_holds,
        "low_entropy_holds": r.low_entropy_holds,
        "holds": r.holds(),
    })
}

pub fn thermal_projector(r: &ThermalProjectorReport) -> Value {
    json!({
        "temperature": r.temperature,
        "n_ground": r.n_ground,
        "partition_function": r.partition_function,
        "exact": r.exact,
        "formula": r.formula,
        "formula_as_displayed": r.formula_as_displayed,
        "f_excited": r.f_excited,
    })
}

pub fn solver(r: &SolveReport) -> Value {
    json!({
        "converged": r.converged,
        "stop_reason": r.stop_reason.as_str(),
        "iterations": r.iterations,
        "final_constraint_residual": r.final_constraint_residual,
        "final_marginal_error": r.final_marginal_error,
        "effective_beta": r.effective_beta,
        "objective": r.dual_point.objective,
        "log_z": r.dual_point.log_z,
        "lambdas": r.dual_point.lambdas,
    })
}

pub fn gaussian_fit(len: usize, window: &[(usize, f64)], fit: &GaussianFit) -> Value {
    json!({
        "L": len,
        "R": window.len() - 1,
        "lambdas": fit.couplings.lambdas,
        "residual": fit.residual,
        "s_rec": fit.entropy(len),
        "G_window": window.iter().map(|&(_, g)| g).collect::<Vec<_>>(),
        "G_fitted": fit.fitted,
        "converged": fit.converged,
        "stop_reason": fit.stop_reason.as_str(),
        "iterations": fit.iterations,
    })
}
