//! Independent reference computations for the integration tests. Nothing here
//! goes through the library's own tensor, Pauli or eigen routines.
#![allow(dead_code)]

use maxent_core::linalg::{DensityMatrix, Geometry, HermitianOperator, SystemLayout};
use maxent_core::{CMatrix, C64};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| kron(&acc, f))
}

pub fn sx() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn sy() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn sz() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `op` on site `k` of `n` qubits, site 0 most significant.
pub fn on_site(op: &CMatrix, k: usize, n: usize) -> CMatrix {
    let f: Vec<CMatrix> = (0..n).map(|i| if i == k { op.clone() } else { eye(2) }).collect();
    kron_all(&f)
}

pub fn ring(n: usize) -> SystemLayout {
    SystemLayout::qubits(Geometry::Ring { len: n }).unwrap()
}

pub fn open_chain(n: usize) -> SystemLayout {
    SystemLayout::qubits(Geometry::OpenChain { len: n }).unwrap()
}

/// Dense TFIM `−J Σ Z Z − h Σ X` on a ring of `n > 2` sites.
pub fn tfim_dense(n: usize, j: f64, h: f64) -> CMatrix {
    let mut m = CMatrix::zeros(1 << n, 1 << n);
    for x in 0..n {
        let y = (x + 1) % n;
        m -= on_site(&sz(), x, n) * on_site(&sz(), y, n) * c(j, 0.0);
        m -= on_site(&sx(), x, n) * c(h, 0.0);
    }
    m
}

/// Hermitian eigen-decomposition through the real symmetric `2n × 2n`
/// embedding `[[A, −B], [B, A]]` (each eigenvalue appears twice).
pub fn eig_via_real_embedding(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    let big = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

/// Entropy from the real-embedding spectrum.
pub fn entropy_oracle(m: &CMatrix) -> f64 {
    eig_via_real_embedding(m).into_iter().filter(|&p| p > 1e-14).map(|p| -p * p.ln()).sum()
}

/// Trace norm as the sum of singular values.
pub fn trace_norm_oracle(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// `exp(A)` by scaling and squaring of a Taylor series.
pub fn expm_taylor(a: &CMatrix) -> CMatrix {
    let norm: f64 = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let s = (norm.log2().ceil().max(0.0) as i32) + 1;
    let scaled = a / c(2f64.powi(s), 0.0);
    let n = a.nrows();
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..30 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Partial trace by explicit index sums, keeping `keep` (sorted) of `n` qubits.
pub fn partial_trace_oracle(rho: &CMatrix, n: usize, keep: &[usize]) -> CMatrix {
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let k = keep.len();
    let bit = |idx: usize, site: usize| (idx >> (n - 1 - site)) & 1;
    let mut out = CMatrix::zeros(1 << k, 1 << k);
    for i in 0..(1usize << n) {
        for j in 0..(1usize << n) {
            if traced.iter().all(|&t| bit(i, t) == bit(j, t)) {
                let a = keep.iter().fold(0, |acc, &s| (acc << 1) | bit(i, s));
                let b = keep.iter().fold(0, |acc, &s| (acc << 1) | bit(j, s));
                out[(a, b)] += rho[(i, j)];
            }
        }
    }
    out
}

/// Ginibre-type random density matrix of dimension `dim` and full rank.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
    m / c(tr, 0.0)
}

/// Random pure state `|ψ⟩⟨ψ|`.
pub fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let v = nalgebra::DVector::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let v = &v / c(v.norm(), 0.0);
    &v * v.adjoint()
}

pub fn density(layout: SystemLayout, m: CMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix(layout, m).unwrap()
}

pub fn hermitian(layout: SystemLayout, m: CMatrix) -> HermitianOperator {
    HermitianOperator::new(layout, m).unwrap()
}

/// Jordan–Wigner fermions on `n` modes: `c_j = Z_0 ⋯ Z_{j−1} a_j` with
/// `a = |0⟩⟨1|`, `|1⟩` occupied.
pub struct Fock {
    pub n: usize,
    pub annihilators: Vec<CMatrix>,
}

impl Fock {
    pub fn new(n: usize) -> Self {
        let a = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        let annihilators = (0..n)
            .map(|j| {
                let f: Vec<CMatrix> =
                    (0..n).map(|i| if i < j { sz() } else if i == j { a.clone() } else { eye(2) }).collect();
                kron_all(&f)
            })
            .collect();
        Self { n, annihilators }
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `c†_x c_y`.
    pub fn hop(&self, x: usize, y: usize) -> CMatrix {
        self.annihilators[x].adjoint() * &self.annihilators[y]
    }

    /// `Σ h_{xy} c†_x c_y`.
    pub fn quadratic(&self, h: &DMatrix<f64>) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for x in 0..self.n {
            for y in 0..self.n {
                if h[(x, y)] != 0.0 {
                    m += self.hop(x, y) * c(h[(x, y)], 0.0);
                }
            }
        }
        m
    }

    /// `G_{x,y} = tr(ρ c†_x c_y)` (real part).
    pub fn correlations(&self, rho: &CMatrix) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |x, y| (rho * self.hop(x, y)).trace().re)
    }
}

/// `max |a_ij − b_ij|`.
pub fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Finite-difference gradient of `f` at `x` with central differences.
pub fn central_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            (f(&p) - f(&m)) / (2.0 * h)
        })
        .collect()
}
