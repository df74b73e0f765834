//! The four subcommands, as library functions returning the result document.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use maxent_core::certify::{certify, ground_bounds_in, thermal_projector_distance, topo_bounds_in};
use maxent_core::fermion::{fit_couplings, ground_correlations, FermionRing};
use maxent_core::lattice::{
    build_tfim_chain, build_toric_code_2x2, ground_space, intervals, stabilizer_regions, thermal_state, GroundSpace,
    LocalHamiltonian, RegionSet, DEFAULT_DEGENERACY_TOL,
};
use maxent_core::linalg::{trace_norm_distance, von_neumann_entropy, DensityMatrix, SystemLayout};
use maxent_core::marginals::{constraints_from_state, marginal_error, ConstraintSet};
use maxent_core::solver::{is_monotone, solve, SolverOptions};
use serde_json::{json, Map, Value};

use crate::config::{FermionSpec, ModelSpec, RegionSpec, RunConfig, StateSpec};
use crate::error::{config, CliError};
use crate::formats::{read_constraints, read_density, write_json, ConstraintFile, DensityFile};
use crate::json::{self, SCHEMA_VERSION};
use crate::report;

/// Entropies of solved sweep entries may rise by this much with `R`.
pub const MONOTONE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Reconstruct,
    Sweep,
    Certify,
    Fermion,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Reconstruct => "reconstruct",
            Command::Sweep => "sweep",
            Command::Certify => "certify",
            Command::Fermion => "fermion",
        }
    }
}

/// A finished command: the result document and whether every solve in it
/// converged.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Value,
    pub converged: bool,
}

impl Outcome {
    /// 0 when converged, 2 otherwise. Errors map to 1 before an outcome exists.
    pub fn exit_code(&self) -> i32 {
        if self.converged {
            0
        } else {
            2
        }
    }

    pub fn render(&self) -> Result<String, CliError> {
        json::to_string(&self.result).map_err(|e| CliError::Format(e.to_string()))
    }
}

pub fn run(command: Command, cfg: &RunConfig, jobs: usize) -> Result<Outcome, CliError> {
    match command {
        Command::Reconstruct => cmd_reconstruct(cfg),
        Command::Sweep => cmd_sweep(cfg, jobs),
        Command::Certify => cmd_certify(cfg),
        Command::Fermion => cmd_fermion(cfg),
    }
}

fn document(command: Command, cfg: &RunConfig, body: Map<String, Value>) -> Result<Value, CliError> {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("command".into(), json!(command.name()));
    doc.insert("config".into(), serde_json::to_value(cfg).map_err(|e| CliError::Format(e.to_string()))?);
    doc.extend(body);
    Ok(Value::Object(doc))
}

fn error_value(e: &CliError) -> Value {
    json!({"kind": e.kind(), "message": e.to_string()})
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("report builders return objects"),
    }
}

/// Where the local data comes from.
enum Source {
    State { hamiltonian: LocalHamiltonian, rho: DensityMatrix, ground: Option<GroundSpace> },
    Marginals(ConstraintSet),
}

fn hamiltonian(model: &ModelSpec) -> Result<LocalHamiltonian, CliError> {
    match model {
        ModelSpec::Tfim(t) => Ok(build_tfim_chain(t.len, t.coupling, t.field, t.geometry.into())?),
        ModelSpec::Toric2x2 => Ok(build_toric_code_2x2()?),
        ModelSpec::Fermion(_) => Err(config("the fermion model is handled by the `fermion` and `sweep` commands")),
        ModelSpec::MarginalFile(_) => Err(config("a marginal file carries no Hamiltonian")),
    }
}

fn prepare(cfg: &RunConfig) -> Result<Source, CliError> {
    let model = cfg.model()?;
    if let ModelSpec::MarginalFile(path) = model {
        if cfg.state.is_some() {
            return Err(config("\"state\" cannot be combined with a marginal file"));
        }
        return Ok(Source::Marginals(read_constraints(path)?));
    }
    let hamiltonian = hamiltonian(model)?;
    let state = cfg.state.as_ref().ok_or_else(|| config("missing \"state\""))?;
    let (rho, ground) = match state {
        StateSpec::Ground => {
            let space = ground_space(&hamiltonian, DEFAULT_DEGENERACY_TOL)?;
            (space.ground_state()?, Some(space))
        }
        StateSpec::Thermal { temperature } => (thermal_state(&hamiltonian, *temperature)?, None),
        StateSpec::EigenstateIndex(n) => (ground_space(&hamiltonian, DEFAULT_DEGENERACY_TOL)?.eigenstate(*n)?, None),
    };
    Ok(Source::State { hamiltonian, rho, ground })
}

fn region_set(spec: &RegionSpec, layout: &SystemLayout) -> Result<RegionSet, CliError> {
    Ok(match spec {
        RegionSpec::Intervals(r) => intervals(layout, *r)?,
        RegionSpec::Explicit(list) => RegionSet::new(layout, list.clone())?,
        RegionSpec::Stabilizers => stabilizer_regions(layout)?,
    })
}

struct Reconstruction {
    body: Map<String, Value>,
    converged: bool,
    constraints: ConstraintSet,
    sigma: DensityMatrix,
}

fn reconstruct_one(
    source: &Source,
    regions: Option<&RegionSpec>,
    s_rho_claim: Option<f64>,
    opts: &SolverOptions,
) -> Result<Reconstruction, CliError> {
    let cs = match source {
        Source::State { rho, .. } => {
            let spec = regions.ok_or_else(|| config("missing \"regions\""))?;
            constraints_from_state(rho, &region_set(spec, rho.layout())?)?
        }
        Source::Marginals(cs) => {
            if regions.is_some() {
                return Err(config("regions come from the marginal file"));
            }
            cs.clone()
        }
    };
    let report = solve(&cs, opts)?;
    let sigma = &report.dual_point.sigma;
    let mut converged = report.converged;

    let (s_rho, distance, certificate) = match source {
        Source::State { rho, .. } => {
            let cert = match certify(sigma, None, Some(rho)) {
                Ok(c) => report::certificate(&c),
                Err(e) => {
                    converged = false;
                    json!({"error": error_value(&e.into())})
                }
            };
            (Some(von_neumann_entropy(rho)), Some(trace_norm_distance(sigma, rho)?), cert)
        }
        Source::Marginals(_) => {
            let cert = match s_rho_claim {
                Some(s) => report::certificate(&certify(sigma, Some(s), None)?),
                None => Value::Null,
            };
            (s_rho_claim, None, cert)
        }
    };

    let bounds = match source {
        Source::State { hamiltonian, ground: Some(space), .. } => {
            let eps = report.final_marginal_error.unwrap_or(report.final_constraint_residual).max(f64::MIN_POSITIVE);
            let r = if space.degeneracy() >= 2 {
                topo_bounds_in(sigma, hamiltonian, space, eps).map(|b| report::topo_bounds(&b))
            } else {
                ground_bounds_in(sigma, hamiltonian, space, eps).map(|b| report::ground_bounds(&b))
            };
            r.unwrap_or_else(|e| json!({"error": error_value(&e.into())}))
        }
        _ => Value::Null,
    };

    let body = object(json!({
        "regions": {"count": cs.regions().len(), "window": cs.regions().window()},
        "n_constraints": cs.len(),
        "s_rec": report.s_rec,
        "s_rho": s_rho,
        "trace_distance": distance,
        "marginal_error": report.final_marginal_error,
        "constraint_residual": report.final_constraint_residual,
        "certificate": certificate,
        "bounds": bounds,
        "solver": report::solver(&report),
    }));
    let sigma = report.dual_point.sigma;
    Ok(Reconstruction { body, converged, constraints: cs, sigma })
}

fn s_rho_claim(cfg: &RunConfig) -> Option<f64> {
    cfg.certify.as_ref().and_then(|c| c.s_rho)
}

fn cmd_reconstruct(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opts = cfg.solver_options()?;
    let source = prepare(cfg)?;
    let rec = reconstruct_one(&source, cfg.regions.as_ref(), s_rho_claim(cfg), &opts)?;
    if let Some(path) = &cfg.outputs.marginals {
        write_json(path, &ConstraintFile::of(&rec.constraints)?)?;
    }
    if let Some(path) = &cfg.outputs.sigma {
        write_json(path, &DensityFile::of(&rec.sigma)?)?;
    }
    if let Some(path) = &cfg.outputs.rho {
        let Source::State { rho, .. } = &source else {
            return Err(config("a marginal file carries no state to store"));
        };
        write_json(path, &DensityFile::of(rho)?)?;
    }
    Ok(Outcome { result: document(Command::Reconstruct, cfg, rec.body)?, converged: rec.converged })
}

/// Runs `task(i)` for `i < n` on up to `jobs` threads; results keep index order.
fn run_pool<T: Send>(n: usize, jobs: usize, task: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, n.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let out = task(i);
                slots.lock().expect("worker panicked")[i] = Some(out);
            });
        }
    });
    slots.into_inner().expect("worker panicked").into_iter().map(|s| s.expect("every index ran")).collect()
}

fn sweep_windows(cfg: &RunConfig) -> Result<Vec<usize>, CliError> {
    let mut windows = cfg.sweep.clone().ok_or_else(|| config("missing \"sweep\" list"))?;
    if windows.is_empty() {
        return Err(config("\"sweep\" list is empty"));
    }
    windows.sort_unstable();
    windows.dedup();
    Ok(windows)
}

fn cmd_sweep(cfg: &RunConfig, jobs: usize) -> Result<Outcome, CliError> {
    let opts = cfg.solver_options()?;
    let windows = sweep_windows(cfg)?;
    let o = &cfg.outputs;
    if o.marginals.is_some() || o.sigma.is_some() || o.rho.is_some() {
        return Err(config("marginal and state outputs are written by `reconstruct`, not `sweep`"));
    }

    // Each entry: (body, s_rec, converged) or an error.
    let results: Vec<Result<(Value, f64, bool), CliError>> = match cfg.model()? {
        ModelSpec::Fermion(spec) => {
            let correlations = ground_correlations(&fermion_ring(spec)?);
            run_pool(windows.len(), jobs, |i| {
                let window = correlations.window(windows[i])?;
                let fit = fit_couplings(&window, spec.len, &opts)?;
                Ok((report::gaussian_fit(spec.len, &window, &fit), fit.entropy(spec.len), fit.converged))
            })
        }
        _ => {
            let source = prepare(cfg)?;
            if matches!(source, Source::Marginals(_)) {
                return Err(config("a sweep re-extracts local data and needs a model with a state"));
            }
            run_pool(windows.len(), jobs, |i| {
                let rec = reconstruct_one(&source, Some(&RegionSpec::Intervals(windows[i])), None, &opts)?;
                let s_rec = rec.body["s_rec"].as_f64().unwrap_or(f64::NAN);
                Ok((Value::Object(rec.body), s_rec, rec.converged))
            })
        }
    };

    let mut entries = Vec::with_capacity(windows.len());
    let mut solved = Vec::new();
    let mut all_converged = true;
    for (&window, result) in windows.iter().zip(results) {
        match result {
            Ok((body, s_rec, converged)) => {
                all_converged &= converged;
                if converged {
                    solved.push((window, s_rec));
                }
                entries.push(json!({"window": window, "result": body}));
            }
            Err(e) => {
                all_converged = false;
                entries.push(json!({"window": window, "error": error_value(&e)}));
            }
        }
    }
    let body = object(json!({
        "entries": entries,
        "s_rec": solved.iter().map(|&(r, s)| json!([r, s])).collect::<Vec<_>>(),
        "monotone": is_monotone(&solved, MONOTONE_SLACK),
        "monotone_slack": MONOTONE_SLACK,
    }));
    Ok(Outcome { result: document(Command::Sweep, cfg, body)?, converged: all_converged })
}

fn fermion_ring(spec: &FermionSpec) -> Result<FermionRing, CliError> {
    Ok(FermionRing::new(spec.len, spec.hopping)?)
}

fn cmd_fermion(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opts = cfg.solver_options()?;
    let ModelSpec::Fermion(spec) = cfg.model()? else {
        return Err(config("the `fermion` command needs a fermion model"));
    };
    if !matches!(cfg.state, None | Some(StateSpec::Ground)) {
        return Err(config("the fermion pipeline reconstructs the ground state only"));
    }
    let Some(RegionSpec::Intervals(r)) = cfg.regions else {
        return Err(config("the fermion window is given as {\"intervals\": R}"));
    };
    let window = ground_correlations(&fermion_ring(spec)?).window(r)?;
    let fit = fit_couplings(&window, spec.len, &opts)?;
    let body = object(report::gaussian_fit(spec.len, &window, &fit));
    Ok(Outcome { result: document(Command::Fermion, cfg, body)?, converged: fit.converged })
}

fn cmd_certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.certify.as_ref().ok_or_else(|| config("missing \"certify\" section"))?;
    let sigma_path = spec.sigma_file.as_ref().ok_or_else(|| config("missing \"certify.sigma_file\""))?;
    let sigma = read_density(sigma_path)?;
    let rho = spec.rho_file.as_deref().map(read_density).transpose()?;
    let cert = certify(&sigma, spec.s_rho, rho.as_ref())?;
    let distance = rho.as_ref().map(|r| trace_norm_distance(&sigma, r)).transpose()?;

    let (residual, eps) = match &spec.marginal_file {
        Some(path) => {
            let cs = read_constraints(path)?;
            (Some(cs.residual(&sigma)?), Some(marginal_error(&sigma, &cs.region_states()?)?))
        }
        None => (None, None),
    };

    let mut bounds = Value::Null;
    let mut thermal = Value::Null;
    if let Some(model @ (ModelSpec::Tfim(_) | ModelSpec::Toric2x2)) = &cfg.model {
        let h = hamiltonian(model)?;
        let space = ground_space(&h, DEFAULT_DEGENERACY_TOL)?;
        if let Some(eps) = eps {
            let eps = eps.max(f64::MIN_POSITIVE);
            bounds = if space.degeneracy() >= 2 {
                report::topo_bounds(&topo_bounds_in(&sigma, &h, &space, eps)?)
            } else {
                report::ground_bounds(&ground_bounds_in(&sigma, &h, &space, eps)?)
            };
        }
        if let Some(StateSpec::Thermal { temperature }) = cfg.state {
            thermal = report::thermal_projector(&thermal_projector_distance(&h, temperature)?);
        }
    }

    let body = object(json!({
        "certificate": report::certificate(&cert),
        "trace_distance": distance,
        "constraint_residual": residual,
        "marginal_error": eps,
        "bounds": bounds,
        "thermal_projector": thermal,
    }));
    Ok(Outcome { result: document(Command::Certify, cfg, body)?, converged: cert.satisfied })
}
