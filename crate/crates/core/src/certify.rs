//! Certificates and error-regime bounds for reconstructions.
//!
//! * The entropy certificate `(1/8)‖ρ − σ‖₁² ≤ S(σ) − S(ρ)` for a
//!   maximum-entropy `σ` consistent with data from `ρ`.
//! * Energy and excited-weight bounds for approximately consistent
//!   reconstructions of ground states.
//! * The high-energy-weight and continuity chain for degenerate ground bands.
//! * Distance between the ground-band mixture and a low-temperature Gibbs state.

use alloc::format;

use crate::lattice::{ground_space, thermal_state, GroundSpace, LocalHamiltonian, DEFAULT_DEGENERACY_TOL};
use crate::linalg::{
    shannon_entropy, trace_norm_distance, von_neumann_entropy, DensityMatrix, Spectrum,
};
use crate::{math, Error, Result};

/// Numerical slack granted to every inequality check.
pub const BOUND_SLACK: f64 = 1e-9;
/// `S_rec` may undershoot `S(ρ)` by this much before maximality is deemed violated.
pub const MAXIMALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub s_rec: f64,
    pub s_rho: f64,
    /// `(1/8)‖ρ − σ‖₁²`, when ρ is known.
    pub lhs: Option<f64>,
    /// `S_rec − S(ρ)`.
    pub rhs: f64,
    /// `rhs − lhs`, when ρ is known.
    pub slack: Option<f64>,
    pub satisfied: bool,
    /// Certified `‖ρ − σ‖₁ ≤ sqrt(8 · rhs)`.
    pub distance_bound: f64,
}

/// Evaluates the certificate for `sigma`. `s_rho` defaults to `S(rho)` when
/// `rho` is given; at least one of them is required.
pub fn certify(sigma: &DensityMatrix, s_rho: Option<f64>, rho: Option<&DensityMatrix>) -> Result<CertificateReport> {
    let s_rho = match (s_rho, rho) {
        (Some(s), _) => s,
        (None, Some(r)) => von_neumann_entropy(r),
        (None, None) => return Err(Error::Domain("certify needs S(ρ) or ρ".into())),
    };
    let s_rec = von_neumann_entropy(sigma);
    let rhs = s_rec - s_rho;
    let (lhs, slack) = match rho {
        Some(r) => {
            if s_rec < s_rho - MAXIMALITY_TOL {
                return Err(Error::MaximalityViolated { s_rec, s_rho });
            }
            let d = trace_norm_distance(r, sigma)?;
            let lhs = d * d / 8.0;
            (Some(lhs), Some(rhs - lhs))
        }
        None => (None, None),
    };
    Ok(CertificateReport {
        s_rec,
        s_rho,
        lhs,
        rhs,
        slack,
        satisfied: slack.unwrap_or(rhs) >= -BOUND_SLACK,
        distance_bound: math::sqrt(rhs.max(0.0) * 8.0),
    })
}

/// `((1/8)‖ρ − σ‖₁², S((ρ+σ)/2) − (S(ρ) + S(σ))/2)`; the first never exceeds
/// the second.
pub fn two_state_bound(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(f64, f64)> {
    let d = trace_norm_distance(rho, sigma)?;
    let mid = rho.mix(sigma, 0.5)?;
    let rhs = von_neumann_entropy(&mid) - 0.5 * (von_neumann_entropy(rho) + von_neumann_entropy(sigma));
    Ok((d * d / 8.0, rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundBoundReport {
    /// Achieved marginal error `ε`.
    pub eps: f64,
    pub ground_energy: f64,
    /// `tr(σ(H − E0))`.
    pub energy_excess: f64,
    /// `ε · L^D · max_x ‖H_x‖`.
    pub eps_bound: f64,
    pub gap: f64,
    /// `tr(σ(1 − P))` from the spectral projector.
    pub excited_weight: f64,
    /// `energy_excess / Δ`.
    pub excited_weight_bound: f64,
    /// `1 − excited_weight_bound`.
    pub overlap_lower_bound: f64,
    pub energy_bound_holds: bool,
    pub excited_bound_holds: bool,
}

impl GroundBoundReport {
    pub fn holds(&self) -> bool {
        self.energy_bound_holds && self.excited_bound_holds && self.energy_excess >= -BOUND_SLACK
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("marginal error {eps} must be positive")))
    }
}

fn band_gap(space: &GroundSpace) -> Result<f64> {
    space.gap.ok_or_else(|| Error::Domain("the ground band is the whole spectrum; no gap".into()))
}

struct Energetics {
    excess: f64,
    excited: f64,
    eps_bound: f64,
}

fn energetics(sigma: &DensityMatrix, hamiltonian: &LocalHamiltonian, space: &GroundSpace, eps: f64) -> Result<Energetics> {
    let h = hamiltonian.assemble()?;
    let excess = sigma.expectation(&h)? - space.energy;
    let p = space.projector();
    let excited = 1.0 - sigma.expectation(&p)?;
    let volume = hamiltonian.layout().geometry().volume() as f64;
    Ok(Energetics { excess, excited, eps_bound: eps * volume * hamiltonian.max_term_norm() })
}

/// Energy and excited-weight bounds for `sigma`, given its marginal error `eps`.
pub fn ground_bounds(sigma: &DensityMatrix, hamiltonian: &LocalHamiltonian, eps: f64) -> Result<GroundBoundReport> {
    let space = ground_space(hamiltonian, DEFAULT_DEGENERACY_TOL)?;
    ground_bounds_in(sigma, hamiltonian, &space, eps)
}

/// [`ground_bounds`] with a precomputed ground space.
pub fn ground_bounds_in(
    sigma: &DensityMatrix,
    hamiltonian: &LocalHamiltonian,
    space: &GroundSpace,
    eps: f64,
) -> Result<GroundBoundReport> {
    check_eps(eps)?;
    hamiltonian.layout().ensure_compatible(sigma.layout())?;
    let gap = band_gap(space)?;
    let e = energetics(sigma, hamiltonian, space, eps)?;
    let excited_weight_bound = e.excess / gap;
    Ok(GroundBoundReport {
        eps,
        ground_energy: space.energy,
        energy_excess: e.excess,
        eps_bound: e.eps_bound,
        gap,
        excited_weight: e.excited,
        excited_weight_bound,
        overlap_lower_bound: 1.0 - excited_weight_bound,
        energy_bound_holds: e.excess <= e.eps_bound + BOUND_SLACK,
        excited_bound_holds: gap * e.excited <= e.excess + BOUND_SLACK,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopoBoundReport {
    pub eps: f64,
    pub n_ground: usize,
    pub gap: f64,
    /// Local Hilbert-space dimension `d`.
    pub local_dim: usize,
    pub energy_excess: f64,
    /// `tr(P_high σ)`.
    pub p_high: f64,
    /// `energy_excess / Δ`.
    pub p_high_bound: f64,
    /// `ε · L^D · max_x ‖H_x‖ / Δ`.
    pub p_high_eps_bound: f64,
    /// `2 p_high L^D log(d / (2 p_high))`, zero at `p_high = 0`.
    pub fannes_term: f64,
    /// Bound on `(1/8)‖P/N − σ‖₁²`; equals `fannes_term`, floored at 0.
    pub final_bound: f64,
    /// `S(P σ P / p_low)`.
    pub s_low: f64,
    pub log_n: f64,
    pub p_high_holds: bool,
    pub eps_holds: bool,
    pub low_entropy_holds: bool,
}

impl TopoBoundReport {
    pub fn holds(&self) -> bool {
        self.p_high_holds && self.eps_holds && self.low_entropy_holds && (-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&self.p_high)
    }
}

/// `2 p V log(d / (2p))` with `0 log 0 = 0`.
pub fn fannes_term(p: f64, volume: f64, local_dim: usize) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        2.0 * p * volume * math::ln(local_dim as f64 / (2.0 * p))
    }
}

/// High-energy weight and continuity bounds for `sigma` against a degenerate
/// ground band.
pub fn topo_bounds(sigma: &DensityMatrix, hamiltonian: &LocalHamiltonian, eps: f64) -> Result<TopoBoundReport> {
    let space = ground_space(hamiltonian, DEFAULT_DEGENERACY_TOL)?;
    topo_bounds_in(sigma, hamiltonian, &space, eps)
}

/// [`topo_bounds`] with a precomputed ground space.
pub fn topo_bounds_in(
    sigma: &DensityMatrix,
    hamiltonian: &LocalHamiltonian,
    space: &GroundSpace,
    eps: f64,
) -> Result<TopoBoundReport> {
    check_eps(eps)?;
    hamiltonian.layout().ensure_compatible(sigma.layout())?;
    let n = space.degeneracy();
    if n < 2 {
        return Err(Error::Domain("ground band is nondegenerate; use ground_bounds".into()));
    }
    let gap = band_gap(space)?;
    let e = energetics(sigma, hamiltonian, space, eps)?;
    let p_high = e.excited.clamp(0.0, 1.0);
    let p_high_bound = e.excess / gap;
    let p_high_eps_bound = e.eps_bound / gap;
    let local_dim = hamiltonian.layout().local_dim();
    let volume = hamiltonian.layout().geometry().volume() as f64;
    let fannes = fannes_term(p_high, volume, local_dim);

    // Spectrum of the low block P σ P, expressed in the band basis.
    let s_low = {
        let v = &space.states;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| (v[i].adjoint() * sigma.matrix() * &v[j])[(0, 0)]);
        let spec = Spectrum::of_hermitian(&m).eigenvalues;
        let p_low: f64 = spec.iter().sum();
        if p_low > 0.0 {
            shannon_entropy(spec.iter().map(|x| (x / p_low).max(0.0)))
        } else {
            0.0
        }
    };
    let log_n = math::ln(n as f64);
    Ok(TopoBoundReport {
        eps,
        n_ground: n,
        gap,
        local_dim,
        energy_excess: e.excess,
        p_high,
        p_high_bound,
        p_high_eps_bound,
        fannes_term: fannes,
        final_bound: fannes.max(0.0),
        s_low,
        log_n,
        p_high_holds: e.excited <= p_high_bound + BOUND_SLACK,
        eps_holds: p_high_bound <= p_high_eps_bound + BOUND_SLACK,
        low_entropy_holds: s_low <= log_n + 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalProjectorReport {
    pub temperature: f64,
    pub n_ground: usize,
    /// `Z(T)` with the ground energy shifted to zero.
    pub partition_function: f64,
    /// `‖P/N − ρ(T)‖₁` from dense matrices.
    pub exact: f64,
    /// `2 (Z − N) / Z`, exact for a perfectly degenerate band.
    pub formula: f64,
    /// `1/N − 1/Z + (Z − N)/Z`, which drops the factor `N` on the ground block.
    pub formula_as_displayed: f64,
    /// `−T log Z + T log N`.
    pub f_excited: f64,
}

/// Distance between the ground-band mixture and the Gibbs state at `temperature`.
pub fn thermal_projector_distance(hamiltonian: &LocalHamiltonian, temperature: f64) -> Result<ThermalProjectorReport> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!("temperature {temperature} must be positive and finite")));
    }
    let space = ground_space(hamiltonian, DEFAULT_DEGENERACY_TOL)?;
    let rho = thermal_state(hamiltonian, temperature)?;
    let mixture = space.mixture()?;
    let exact = trace_norm_distance(&mixture, &rho)?;
    let z: f64 = space
        .spectrum
        .eigenvalues
        .iter()
        .map(|e| math::exp(-(e - space.energy) / temperature))
        .sum();
    let n = space.degeneracy() as f64;
    Ok(ThermalProjectorReport {
        temperature,
        n_ground: space.degeneracy(),
        partition_function: z,
        exact,
        formula: 2.0 * (z - n) / z,
        formula_as_displayed: 1.0 / n - 1.0 / z + (z - n) / z,
        f_excited: -temperature * math::ln(z) + temperature * math::ln(n),
    })
}
