use super::operator::{trace_product, DensityMatrix};
use super::spectrum::Spectrum;
use crate::{math, Result};

/// Eigenvalues below this are treated as exact zeros in `0 log 0`.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;
/// σ-eigenvalues below this count as outside the support of σ.
pub const SUPPORT_FLOOR: f64 = 1e-12;
/// ρ-weight outside supp(σ) above which `S(ρ‖σ)` is infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// `−Σ p log p` over a probability vector, with the floor applied.
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    -probabilities
        .into_iter()
        .filter(|&p| p > EIGENVALUE_FLOOR)
        .map(math::xlogx)
        .sum::<f64>()
}

/// `S(ρ) = −tr ρ log ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(rho.as_operator().spectrum().eigenvalues)
}

/// `‖a − b‖₁`, the sum of absolute eigenvalues of the difference.
pub fn trace_norm_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let diff = a.as_operator().sub(b.as_operator())?;
    Ok(diff.spectrum().eigenvalues.iter().map(|e| e.abs()).sum())
}

/// `S(ρ‖σ) = tr(ρ log ρ − ρ log σ)`; `+∞` when the support of ρ is not
/// contained in that of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.layout().ensure_compatible(sigma.layout())?;
    let sig = Spectrum::of_hermitian(sigma.matrix());
    // Weight of ρ on the numerical kernel of σ.
    let v = &sig.eigenvectors;
    let mut leak = 0.0;
    for (k, &q) in sig.eigenvalues.iter().enumerate() {
        if q < SUPPORT_FLOOR {
            let col = v.column(k);
            leak += (col.adjoint() * rho.matrix() * col)[(0, 0)].re;
        }
    }
    if leak > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let log_sigma = sig.map(|q| if q < SUPPORT_FLOOR { 0.0 } else { math::ln(q) });
    let cross = trace_product(rho.matrix(), &log_sigma);
    Ok(-von_neumann_entropy(rho) - cross)
}
