//! Run configuration, read from a JSON file.
//!
//! ```json
//! {
//!   "model": {"tfim": {"L": 6, "J": 1.0, "h": 1.5, "geometry": "ring"}},
//!   "state": "ground",
//!   "regions": {"intervals": 2},
//!   "solver": {"tolerance_eps": 1e-8},
//!   "sweep": [1, 2, 3]
//! }
//! ```
//!
//! Relative paths inside the file resolve against the file's directory.

use std::path::{Path, PathBuf};

use maxent_core::lattice::ChainGeometry;
use maxent_core::solver::SolverOptions;
use serde::{Deserialize, Serialize};

use crate::error::{config, CliError};
use crate::formats::read_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Tfim(TfimSpec),
    #[serde(rename = "toric2x2")]
    Toric2x2,
    Fermion(FermionSpec),
    MarginalFile(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    #[default]
    Ring,
    Open,
}

impl From<ChainKind> for ChainGeometry {
    fn from(k: ChainKind) -> Self {
        match k {
            ChainKind::Ring => ChainGeometry::Ring,
            ChainKind::Open => ChainGeometry::Open,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfimSpec {
    #[serde(rename = "L")]
    pub len: usize,
    #[serde(rename = "J", default = "one")]
    pub coupling: f64,
    #[serde(rename = "h")]
    pub field: f64,
    #[serde(default)]
    pub geometry: ChainKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermionSpec {
    #[serde(rename = "L")]
    pub len: usize,
    #[serde(rename = "w", default = "one")]
    pub hopping: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Ground,
    Thermal {
        #[serde(rename = "T")]
        temperature: f64,
    },
    EigenstateIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Intervals(usize),
    Explicit(Vec<Vec<usize>>),
    Stabilizers,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub tolerance_eps: f64,
    pub max_iterations: usize,
    pub lambda_cap: f64,
    pub history_size: usize,
    pub seed: u64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            tolerance_eps: d.tolerance_eps,
            max_iterations: d.max_iterations,
            lambda_cap: d.lambda_cap,
            history_size: d.history_size,
            seed: d.seed,
        }
    }
}

impl From<SolverSpec> for SolverOptions {
    fn from(s: SolverSpec) -> Self {
        SolverOptions {
            tolerance_eps: s.tolerance_eps,
            max_iterations: s.max_iterations,
            lambda_cap: s.lambda_cap,
            history_size: s.history_size,
            seed: s.seed,
        }
    }
}

/// Inputs of the `certify` command.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifySpec {
    /// Reconstructed state to certify.
    pub sigma_file: Option<PathBuf>,
    /// Reference state, when known.
    pub rho_file: Option<PathBuf>,
    /// Claimed `S(ρ)` when the state itself is not available.
    pub s_rho: Option<f64>,
    /// Local data `sigma` should reproduce.
    pub marginal_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Result file; standard output when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
    /// Where to store the extracted local data.
    pub marginals: Option<PathBuf>,
    /// Where to store the reconstructed state.
    pub sigma: Option<PathBuf>,
    /// Where to store the model state the local data came from.
    pub rho: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<RegionSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifySpec>,
    #[serde(default)]
    pub outputs: OutputSpec,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub marginals_out: Option<PathBuf>,
    pub sigma_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse { path: "<config>".into(), source: e })
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(ModelSpec::MarginalFile(p)) = &mut self.model {
            fix(p);
        }
        if let Some(c) = &mut self.certify {
            for p in [&mut c.sigma_file, &mut c.rho_file, &mut c.marginal_file].into_iter().flatten() {
                fix(p);
            }
        }
        let o = &mut self.outputs;
        for p in [&mut o.path, &mut o.marginals, &mut o.sigma, &mut o.rho].into_iter().flatten() {
            fix(p);
        }
    }

    /// Command-line values win over the file.
    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(t) = overrides.tolerance {
            self.solver.tolerance_eps = t;
        }
        if let Some(n) = overrides.max_iterations {
            self.solver.max_iterations = n;
        }
        if overrides.out.is_some() {
            self.outputs.path.clone_from(&overrides.out);
        }
        if overrides.marginals_out.is_some() {
            self.outputs.marginals.clone_from(&overrides.marginals_out);
        }
        if overrides.sigma_out.is_some() {
            self.outputs.sigma.clone_from(&overrides.sigma_out);
        }
    }

    pub fn solver_options(&self) -> Result<SolverOptions, CliError> {
        let s = self.solver;
        if !(s.tolerance_eps > 0.0 && s.tolerance_eps.is_finite()) {
            return Err(config(format!("tolerance_eps {} must be positive", s.tolerance_eps)));
        }
        if s.lambda_cap.is_nan() || s.lambda_cap <= 0.0 {
            return Err(config(format!("lambda_cap {} must be positive", s.lambda_cap)));
        }
        Ok(s.into())
    }

    pub fn model(&self) -> Result<&ModelSpec, CliError> {
        self.model.as_ref().ok_or_else(|| config("missing \"model\""))
    }
}
