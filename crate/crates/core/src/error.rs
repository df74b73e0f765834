use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("layout error: {0}")]
    Layout(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("hilbert dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported local dimension {0}; only qubits are supported")]
    UnsupportedDimension(usize),
    #[error("invalid correlation matrix: eigenvalue {0} outside [0, 1]")]
    InvalidCorrelation(f64),
    #[error("non-finite dual objective at ‖λ‖∞ = {max_abs_lambda}")]
    NumericalFailure { max_abs_lambda: f64, lambdas: Vec<f64> },
    #[error("reconstruction entropy {s_rec} is below S(ρ) = {s_rho}; the solve is not maximal")]
    MaximalityViolated { s_rec: f64, s_rho: f64 },
}
