use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::operator::HermitianOperator;
use crate::{math, CMatrix, C64};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// Uses the real symmetric solver when every imaginary part is exactly 0.
    pub fn of_hermitian(m: &CMatrix) -> Self {
        let n = m.nrows();
        if n == 0 {
            return Self { eigenvalues: Vec::new(), eigenvectors: CMatrix::zeros(0, 0) };
        }
        let (values, vectors): (Vec<f64>, CMatrix) = if m.iter().all(|z| z.im == 0.0) {
            let real = DMatrix::from_fn(n, n, |r, c| m[(r, c)].re);
            let eig = real.symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(|x| C64::new(x, 0.0)))
        } else {
            let eig = m.clone().symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues = order.iter().map(|&k| values[k]).collect();
        let eigenvectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
        Self { eigenvalues, eigenvectors }
    }

    /// `V diag(f(e)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        self.with_weights(&weights)
    }

    /// `V diag(w) V†`.
    pub fn with_weights(&self, weights: &[f64]) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &w) in weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(w);
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.with_weights(&self.eigenvalues)
    }
}

/// `f(A)` for Hermitian `A` via its eigendecomposition.
pub fn herm_function(a: &HermitianOperator, f: impl Fn(f64) -> f64) -> HermitianOperator {
    let m = a.spectrum().map(f);
    HermitianOperator::from_symmetrized(a.layout().clone(), m)
}

/// Matrix exponential of a Hermitian operator, `V diag(e^{e_k}) V†`.
pub fn herm_expm(a: &HermitianOperator) -> HermitianOperator {
    herm_function(a, math::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Geometry, SystemLayout};

    fn layout(n: usize) -> SystemLayout {
        SystemLayout::qubits(Geometry::OpenChain { len: n }).unwrap()
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = HermitianOperator::zeros(layout(2));
        let e = herm_expm(&z);
        assert!(crate::linalg::operator::max_abs(&(e.matrix() - CMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn expm_of_diagonal() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(0.3, 0.0);
        m[(1, 1)] = C64::new(-1.7, 0.0);
        let e = herm_expm(&HermitianOperator::new(layout(1), m).unwrap());
        assert!((e.matrix()[(0, 0)].re - 0.3f64.exp()).abs() < 1e-14);
        assert!((e.matrix()[(1, 1)].re - (-1.7f64).exp()).abs() < 1e-14);
        assert!(crate::math::abs(e.matrix()[(0, 1)]) < 1e-15);
    }

    #[test]
    fn eigenvalues_ascend_and_reconstruct() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(2.0, 0.0);
        m[(1, 1)] = C64::new(-1.0, 0.0);
        m[(0, 1)] = C64::new(0.5, 0.25);
        m[(1, 0)] = C64::new(0.5, -0.25);
        m[(2, 2)] = C64::new(0.1, 0.0);
        let s = Spectrum::of_hermitian(&m);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let err = crate::linalg::operator::max_abs(&(s.reconstruct() - &m));
        assert!(err <= 1e-9 * 2.0);
    }
}
