//! Maximum-entropy reconstruction of global quantum states from local data.
//!
//! Given reduced density matrices on a covering set of regions, the
//! reconstruction is the state of largest von Neumann entropy consistent with
//! them. It always has the generalized Boltzmann form
//! `σ = exp(−Σ λ_i O_i) / Z`, and the multipliers are found by minimizing the
//! convex dual `D(λ) = log Z(λ) + Σ λ_i c_i`.
//!
//! The crate is `no_std` (with `alloc`) and carries only numerics:
//!
//! * [`linalg`]: dense Hermitian operators on tensor-product layouts, partial
//!   traces, matrix exponentials, entropies and distances.
//! * [`lattice`]: transverse-field Ising chains, the 2×2 toric code, ground
//!   spaces, Gibbs states and region covers.
//! * [`marginals`]: Pauli-string bases and constraint extraction.
//! * [`solver`]: the dual L-BFGS solver and entropy sweeps.
//! * [`fermion`]: closed-form free-fermion ring reconstruction.
//! * [`certify`]: entropy certificates and energy/gap bounds.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod certify;
mod error;
pub mod fermion;
pub mod lattice;
pub mod linalg;
pub mod marginals;
mod math;
pub mod solver;

pub use error::{Error, Result};
pub use nalgebra::Complex;

/// Complex double used for all operator entries.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector (pure states).
pub type CVector = nalgebra::DVector<C64>;
