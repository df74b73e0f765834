use alloc::format;
use alloc::vec::Vec;

use super::layout::SystemLayout;
use super::spectrum::Spectrum;
use crate::{math, CMatrix, CVector, Error, Result, C64};

/// Relative Hermiticity tolerance on `max |M − M†| / max |M|`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Absolute tolerance on `tr ρ = 1`.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(math::abs(*z)))
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for c in 0..n {
        for r in c..n {
            worst = worst.max(math::abs(m[(r, c)] - m[(c, r)].conj()));
        }
    }
    worst
}

/// `(M + M†) / 2`, used on results that are Hermitian up to rounding.
pub(crate) fn symmetrize(mut m: CMatrix) -> CMatrix {
    let n = m.nrows();
    for c in 0..n {
        m[(c, c)].im = 0.0;
        for r in c + 1..n {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
    m
}

/// Dense Hermitian matrix on a [`SystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    layout: SystemLayout,
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(layout: SystemLayout, matrix: CMatrix) -> Result<Self> {
        let dim = layout.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Layout(format!(
                "matrix is {}x{} but the layout has dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = max_abs(&matrix);
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITICITY_TOL * scale {
            return Err(Error::Invariant(format!(
                "matrix is not Hermitian: max |M - M†| = {defect:e}, max |M| = {scale:e}"
            )));
        }
        Ok(Self { layout, matrix })
    }

    /// Skips the Hermiticity check; the matrix is symmetrized instead.
    pub(crate) fn from_symmetrized(layout: SystemLayout, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.dim());
        Self { layout, matrix: symmetrize(matrix) }
    }

    /// Real symmetric input.
    pub fn from_real(layout: SystemLayout, matrix: &nalgebra::DMatrix<f64>) -> Result<Self> {
        Self::new(layout, matrix.map(|x| C64::new(x, 0.0)))
    }

    pub fn zeros(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        Self { layout, matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        Self { layout, matrix: CMatrix::identity(dim, dim) }
    }

    /// `|ψ⟩⟨ψ|` (not normalized).
    pub fn outer(layout: SystemLayout, psi: &CVector) -> Result<Self> {
        if psi.len() != layout.dim() {
            return Err(Error::Layout(format!(
                "vector length {} does not match dimension {}",
                psi.len(),
                layout.dim()
            )));
        }
        Ok(Self::from_symmetrized(layout, psi * psi.adjoint()))
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// `tr(self · other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianOperator) -> Result<f64> {
        self.layout.ensure_compatible(&other.layout)?;
        Ok(trace_product(&self.matrix, &other.matrix))
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of_hermitian(&self.matrix)
    }

    /// Largest singular value, i.e. largest `|eigenvalue|`.
    pub fn operator_norm(&self) -> f64 {
        let ev = self.spectrum().eigenvalues;
        ev.iter().fold(0.0f64, |acc, e| acc.max(e.abs()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { layout: self.layout.clone(), matrix: &self.matrix * C64::new(factor, 0.0) }
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        self.layout.ensure_compatible(&other.layout)?;
        Ok(Self { layout: self.layout.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<Self> {
        self.layout.ensure_compatible(&other.layout)?;
        Ok(Self { layout: self.layout.clone(), matrix: &self.matrix - &other.matrix })
    }

    /// `A B − B A`, returned as a plain matrix (anti-Hermitian).
    pub fn commutator(&self, other: &HermitianOperator) -> Result<CMatrix> {
        self.layout.ensure_compatible(&other.layout)?;
        Ok(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }
}

/// `Re tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)] * b[(k, i)];
            acc += x.re;
        }
    }
    acc
}

/// Positive, unit-trace [`HermitianOperator`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Invariant(format!("trace is {tr}, expected 1")));
        }
        let min = op.spectrum().eigenvalues.first().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::Invariant(format!("minimum eigenvalue {min:e} is negative")));
        }
        Ok(Self { op })
    }

    pub fn from_matrix(layout: SystemLayout, matrix: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(layout, matrix)?)
    }

    /// Trusted constructor for states built from a spectral decomposition with
    /// nonnegative weights summing to one.
    pub(crate) fn from_trusted(op: HermitianOperator) -> Self {
        Self { op }
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let dim = layout.dim() as f64;
        Self { op: HermitianOperator::identity(layout).scale(1.0 / dim) }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(layout: SystemLayout, psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::Domain("zero state vector".into()));
        }
        Ok(Self { op: HermitianOperator::outer(layout, &(psi / C64::new(norm, 0.0)))? })
    }

    /// Equal-weight mixture of orthonormal vectors, `P / N`.
    pub fn uniform_mixture(layout: SystemLayout, vectors: &[CVector]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Domain("empty mixture".into()));
        }
        let dim = layout.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for v in vectors {
            if v.len() != dim {
                return Err(Error::Layout(format!("vector length {} != {dim}", v.len())));
            }
            m += v * v.adjoint();
        }
        m /= C64::new(vectors.len() as f64, 0.0);
        Self::new(HermitianOperator::from_symmetrized(layout, m))
    }

    /// Normalized product of single-site computational basis states.
    pub fn computational(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        let d = layout.local_dim();
        if digits.len() != layout.num_sites() || digits.iter().any(|&x| x >= d) {
            return Err(Error::Layout("basis label does not match the layout".into()));
        }
        let index = digits.iter().fold(0, |acc, &x| acc * d + x);
        let mut psi = CVector::zeros(layout.dim());
        psi[index] = C64::new(1.0, 0.0);
        Self::pure(layout, &psi)
    }

    pub fn as_operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    pub fn layout(&self) -> &SystemLayout {
        self.op.layout()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `tr(ρ O)`.
    pub fn expectation(&self, observable: &HermitianOperator) -> Result<f64> {
        self.op.trace_product(observable)
    }

    /// Convex combination `p ρ + (1 − p) σ`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("mixing weight {p} outside [0, 1]")));
        }
        let m = self.op.scale(p).add(&other.op.scale(1.0 - p))?;
        Ok(Self { op: m })
    }
}

/// Strides of each tensor position: `d^(n-1-pos)`.
fn strides(layout: &SystemLayout) -> Vec<usize> {
    let n = layout.num_sites();
    let d = layout.local_dim();
    (0..n).map(|p| d.pow((n - 1 - p) as u32)).collect()
}

/// Offsets contributed by each sub-index when its digits are placed at
/// `positions` of the parent layout.
fn sub_offsets(parent_strides: &[usize], positions: &[usize], d: usize) -> Vec<usize> {
    let k = positions.len();
    let sub_dim = d.pow(k as u32);
    (0..sub_dim)
        .map(|s| {
            let mut rem = s;
            let mut off = 0;
            for j in (0..k).rev() {
                off += (rem % d) * parent_strides[positions[j]];
                rem /= d;
            }
            off
        })
        .collect()
}

/// Embeds an operator defined on a subset of sites into `layout` as
/// `op ⊗ 1`, with tensor factors arranged per the layout order.
pub fn tensor_embed(op: &HermitianOperator, layout: &SystemLayout) -> Result<HermitianOperator> {
    let sub = op.layout();
    if sub.local_dim() != layout.local_dim() {
        return Err(Error::Layout("local dimensions differ".into()));
    }
    let positions = layout.positions(sub.sites())?;
    let d = layout.local_dim();
    let st = strides(layout);
    let inner = sub_offsets(&st, &positions, d);
    let complement: Vec<usize> = (0..layout.num_sites()).filter(|p| !positions.contains(p)).collect();
    let outer = sub_offsets(&st, &complement, d);

    let dim = layout.dim();
    let mut m = CMatrix::zeros(dim, dim);
    let src = op.matrix();
    for &base in &outer {
        for (c, &oc) in inner.iter().enumerate() {
            for (r, &or) in inner.iter().enumerate() {
                let v = src[(r, c)];
                if v != C64::new(0.0, 0.0) {
                    m[(base + or, base + oc)] = v;
                }
            }
        }
    }
    Ok(HermitianOperator { layout: layout.clone(), matrix: m })
}

/// Reduced state on `keep`. Factors of the result follow the parent order.
/// An empty `keep` yields the 1×1 state `[1]`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let layout = rho.layout();
    let sub_layout = layout.subsystem(keep)?;
    let d = layout.local_dim();
    let st = strides(layout);
    let kept: Vec<usize> = layout.positions(sub_layout.sites())?;
    let traced: Vec<usize> = (0..layout.num_sites()).filter(|p| !kept.contains(p)).collect();
    let keep_off = sub_offsets(&st, &kept, d);
    let trace_off = sub_offsets(&st, &traced, d);

    let k = keep_off.len();
    let src = rho.matrix();
    let mut out = CMatrix::zeros(k, k);
    for (c, &oc) in keep_off.iter().enumerate() {
        for (r, &or) in keep_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &trace_off {
                acc += src[(or + t, oc + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix { op: HermitianOperator::from_symmetrized(sub_layout, out) })
}

/// Reduced states on each region.
pub fn reduced_states(rho: &DensityMatrix, regions: &[Vec<usize>]) -> Result<Vec<(Vec<usize>, DensityMatrix)>> {
    regions
        .iter()
        .map(|r| Ok((r.clone(), partial_trace(rho, r)?)))
        .collect()
}

/// Pure state from amplitudes given as `(re, im)` pairs; used by tests and the
/// file formats.
pub fn vector_from_pairs(pairs: &[(f64, f64)]) -> CVector {
    CVector::from_iterator(pairs.len(), pairs.iter().map(|&(re, im)| C64::new(re, im)))
}
