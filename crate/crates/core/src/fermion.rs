//! Free fermions hopping on a ring, in the Gaussian (correlation-matrix)
//! formalism.
//!
//! The ring Hamiltonian `H = −w Σ_x (c†_x c_{x+1} + h.c.)` has modes
//! `k = 2πn/L` with energies `E_k = −2w cos k`. A translation-invariant
//! Gaussian reconstruction with window `R` is
//! `σ ∝ exp(−Σ_{δ≤R} λ_δ Σ_x (c†_x c_{x+δ} + h.c.))`, whose single-particle
//! dispersion is `Ẽ_k = Σ_δ 2 λ_δ cos(δk)` and whose correlations are
//! `G̃_{x,y} = (1/L) Σ_k cos(k(x−y)) / (e^{Ẽ_k} + 1)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use nalgebra::DMatrix;

use crate::solver::lbfgs::{self, minimize, Evaluation};
use crate::solver::{SolverOptions, StopReason};
use crate::{math, Error, Result};

/// Eigenvalues of a correlation matrix may stray this far outside `[0, 1]`.
pub const OCCUPATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionRing {
    len: usize,
    hopping: f64,
}

impl FermionRing {
    pub fn new(len: usize, hopping: f64) -> Result<Self> {
        if len < 2 {
            return Err(Error::Size(format!("ring needs at least 2 sites, got {len}")));
        }
        if !(hopping > 0.0 && hopping.is_finite()) {
            return Err(Error::Domain(format!("hopping {hopping} must be positive")));
        }
        Ok(Self { len, hopping })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    /// `E_k = −2w cos(2πn/L)`, exactly zero at `k = ±π/2`.
    pub fn mode_energy(&self, n: usize) -> f64 {
        if is_zero_mode(n, self.len) {
            0.0
        } else {
            -2.0 * self.hopping * mode_cos(n, 1, self.len)
        }
    }

    /// Fermi-sea occupation of mode `n`; zero modes are half filled.
    pub fn ground_occupation(&self, n: usize) -> f64 {
        let e = self.mode_energy(n);
        if e < 0.0 {
            1.0
        } else if e > 0.0 {
            0.0
        } else {
            0.5
        }
    }
}

fn is_zero_mode(n: usize, len: usize) -> bool {
    (4 * n).is_multiple_of(len) && ((4 * n) / len) % 2 == 1
}

/// `cos(2π n δ / L)`. The angle is reduced to `[0, π/2]` in integer
/// arithmetic, so `cos(k + π) = −cos(k)` and `cos(±π/2) = 0` hold exactly.
fn mode_cos(n: usize, delta: usize, len: usize) -> f64 {
    let m = (n % len) * (delta % len) % len;
    let j = m.min(len - m);
    match (4 * j).cmp(&len) {
        Ordering::Less => math::cos(PI * (2 * j) as f64 / len as f64),
        Ordering::Equal => 0.0,
        Ordering::Greater => -math::cos(PI * (len - 2 * j) as f64 / len as f64),
    }
}

/// `Σ_n term(n)`, adding modes `k` and `k + π` first on even rings so that
/// particle-hole symmetric contributions cancel exactly.
fn paired_sum(len: usize, term: impl Fn(usize) -> f64) -> f64 {
    if len % 2 == 1 {
        return (0..len).map(term).sum();
    }
    let half = len / 2;
    (0..half).map(|n| term(n) + term(n + half)).sum()
}

/// `G_δ = 1/2 [δ = 0] + (1/L) Σ_k cos(δk) (n_k − 1/2)`.
fn centered_mode_sum(len: usize, delta: usize, centered: &[f64]) -> f64 {
    let s = paired_sum(len, |n| centered[n] * mode_cos(n, delta, len)) / len as f64;
    if delta == 0 {
        0.5 + s
    } else {
        s
    }
}

/// `n_k − 1/2 = −tanh(Ẽ_k / 2) / 2`, odd in `Ẽ_k`.
fn centered_fermi(e: f64) -> f64 {
    -0.5 * math::tanh(0.5 * e)
}

/// Two-point function `G_{x,y} = ⟨c†_x c_y⟩`, real symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    g: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Checks shape and symmetry; occupation bounds are checked where they
    /// matter (see [`gaussian_entropy`]).
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        if !g.is_square() || g.nrows() == 0 {
            return Err(Error::Size(format!("correlation matrix is {}x{}", g.nrows(), g.ncols())));
        }
        let n = g.nrows();
        for i in 0..n {
            for j in 0..i {
                if !g[(i, j)].is_finite() || (g[(i, j)] - g[(j, i)]).abs() > 1e-12 {
                    return Err(Error::Invariant(format!("correlation matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { g })
    }

    /// Circulant matrix with `G_{x,y} = row[(y − x) mod L]`; `row` must be
    /// reflection symmetric.
    pub fn circulant(row: &[f64]) -> Result<Self> {
        let n = row.len();
        Self::new(DMatrix::from_fn(n, n, |x, y| row[(y + n - x) % n]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.g.nrows()
    }

    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.g[(x, y)]
    }

    /// `[(δ, G_{0,δ}) for δ = 0..=R]`.
    pub fn window(&self, window: usize) -> Result<Vec<(usize, f64)>> {
        if window >= self.len() {
            return Err(Error::Size(format!("window {window} on {} sites", self.len())));
        }
        Ok((0..=window).map(|d| (d, self.g[(0, d)])).collect())
    }

    /// Eigenvalues in ascending order.
    pub fn occupations(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.g.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn is_circulant(&self, tol: f64) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| (self.g[(x, y)] - self.g[(0, (y + n - x) % n)]).abs() <= tol))
    }
}

fn mode_sum_correlations(len: usize, centered: impl Fn(usize) -> f64) -> Result<CorrelationMatrix> {
    let centered: Vec<f64> = (0..len).map(centered).collect();
    let row: Vec<f64> = (0..len).map(|d| centered_mode_sum(len, d, &centered)).collect();
    CorrelationMatrix::circulant(&row)
}

/// Fermi-sea correlations of the ring.
pub fn ground_correlations(ring: &FermionRing) -> CorrelationMatrix {
    mode_sum_correlations(ring.len, |n| ring.ground_occupation(n) - 0.5).expect("mode sums are symmetric")
}

/// Translation-invariant multipliers `λ_0 … λ_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCouplings {
    pub lambdas: Vec<f64>,
}

impl GaussianCouplings {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Size("at least λ_0 is required".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| !l.is_finite()) {
            return Err(Error::Domain(format!("non-finite coupling {l}")));
        }
        Ok(Self { lambdas })
    }

    pub fn window(&self) -> usize {
        self.lambdas.len() - 1
    }

    /// `Ẽ_k = Σ_δ 2 λ_δ cos(δk)` for `k = 2πn/L`.
    pub fn dispersion(&self, n: usize, len: usize) -> f64 {
        self.lambdas.iter().enumerate().map(|(d, l)| 2.0 * l * mode_cos(n, d, len)).sum()
    }

    /// Mode occupations `1 / (e^{Ẽ_k} + 1)`.
    pub fn occupations(&self, len: usize) -> Vec<f64> {
        (0..len).map(|n| math::fermi(self.dispersion(n, len))).collect()
    }
}

/// Correlations of the Gaussian state with dispersion `Ẽ_k`.
pub fn reconstructed_correlations(couplings: &GaussianCouplings, len: usize) -> Result<CorrelationMatrix> {
    if len < 2 {
        return Err(Error::Size(format!("ring needs at least 2 sites, got {len}")));
    }
    mode_sum_correlations(len, |n| centered_fermi(couplings.dispersion(n, len)))
}

/// `−Σ [ν log ν + (1−ν) log(1−ν)]` over the eigenvalues `ν` of `G`.
pub fn gaussian_entropy(g: &CorrelationMatrix) -> Result<f64> {
    let mut s = 0.0;
    for nu in g.occupations() {
        if !(-OCCUPATION_TOL..=1.0 + OCCUPATION_TOL).contains(&nu) {
            return Err(Error::InvalidCorrelation(nu));
        }
        let nu = nu.clamp(0.0, 1.0);
        s -= math::xlogx(nu) + math::xlogx(1.0 - nu);
    }
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct GaussianFit {
    pub couplings: GaussianCouplings,
    /// `max_δ |G̃_δ − G_target_δ|`.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub stop_reason: StopReason,
    /// Reconstructed window `G̃_δ`.
    pub fitted: Vec<f64>,
}

impl GaussianFit {
    /// Entropy of the reconstructed Gaussian state, from its mode occupations.
    pub fn entropy(&self, len: usize) -> f64 {
        self.couplings
            .occupations(len)
            .into_iter()
            .map(|f| -(math::xlogx(f) + math::xlogx(1.0 - f)))
            .sum()
    }
}

struct GaussianDual<'a> {
    len: usize,
    targets: &'a [f64],
}

impl GaussianDual<'_> {
    /// `D/(2L) = (1/(2L)) Σ_k log(1 + e^{−Ẽ_k}) + Σ_δ λ_δ G_δ`, whose gradient
    /// is `G_δ − G̃_δ`.
    fn evaluate(&self, lambdas: &[f64]) -> Evaluation<Vec<f64>> {
        let couplings = GaussianCouplings { lambdas: lambdas.to_vec() };
        let l = self.len as f64;
        let energies: Vec<f64> = (0..self.len).map(|n| couplings.dispersion(n, self.len)).collect();
        let log_z: f64 = energies.iter().map(|&e| math::softplus_neg(e)).sum();
        let centered: Vec<f64> = energies.iter().map(|&e| centered_fermi(e)).collect();
        let fitted: Vec<f64> = (0..lambdas.len()).map(|d| centered_mode_sum(self.len, d, &centered)).collect();
        let value = log_z / (2.0 * l) + lambdas.iter().zip(self.targets).map(|(a, b)| a * b).sum::<f64>();
        let gradient = self.targets.iter().zip(&fitted).map(|(t, g)| t - g).collect();
        Evaluation { value, gradient, payload: fitted }
    }
}

/// Fits `λ_0 … λ_R` to the window `[(δ, G_δ)]` with `δ = 0..=R` by minimizing
/// the Gaussian dual. Targets that only a pure Fermi sea reproduces drive the
/// couplings to the cap; unrepresentable targets come back unconverged.
pub fn fit_couplings(window: &[(usize, f64)], len: usize, options: &SolverOptions) -> Result<GaussianFit> {
    if len < 2 {
        return Err(Error::Size(format!("ring needs at least 2 sites, got {len}")));
    }
    if window.is_empty() || window.iter().enumerate().any(|(i, &(d, _))| d != i) {
        return Err(Error::Layout("window must list separations 0, 1, ..., R in order".into()));
    }
    let r = window.len() - 1;
    if 2 * r > len {
        return Err(Error::Size(format!("window {r} exceeds half the ring length {len}")));
    }
    if let Some(&(d, g)) = window.iter().find(|(_, g)| !g.is_finite()) {
        return Err(Error::Domain(format!("non-finite target {g} at separation {d}")));
    }
    let targets: Vec<f64> = window.iter().map(|&(_, g)| g).collect();
    let dual = GaussianDual { len, targets: &targets };
    let run = minimize(vec![0.0; targets.len()], &options.lbfgs()?, |x| Ok(dual.evaluate(x)))?;
    let residual = lbfgs::max_abs(&run.best.gradient);
    Ok(GaussianFit {
        couplings: GaussianCouplings { lambdas: run.x },
        residual,
        converged: residual <= options.tolerance_eps,
        iterations: run.iterations,
        stop_reason: run.stop,
        fitted: run.best.payload,
    })
}
