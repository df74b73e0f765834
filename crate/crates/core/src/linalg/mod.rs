//! Dense Hermitian operator algebra on finite tensor-product spaces.

mod entropy;
mod layout;
pub(crate) mod operator;
mod spectrum;

pub use entropy::{
    relative_entropy, shannon_entropy, trace_norm_distance, von_neumann_entropy, EIGENVALUE_FLOOR,
};
pub use layout::{Geometry, SystemLayout, DEFAULT_DIMENSION_CAP};
pub use operator::{
    partial_trace, reduced_states, tensor_embed, vector_from_pairs, DensityMatrix, HermitianOperator,
    HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use spectrum::{herm_expm, herm_function, Spectrum};
