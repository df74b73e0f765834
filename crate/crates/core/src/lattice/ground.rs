use alloc::format;
use alloc::vec::Vec;

use super::LocalHamiltonian;
use crate::linalg::{herm_expm, DensityMatrix, HermitianOperator, Spectrum, SystemLayout};
use crate::{CMatrix, CVector, Error, Result};

/// Absolute energy window defining the (approximately) degenerate ground band.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct GroundSpace {
    layout: SystemLayout,
    pub energy: f64,
    /// Orthonormal basis of the ground band.
    pub states: Vec<CVector>,
    /// First level above the band minus `energy`; `None` when the band is the
    /// whole spectrum.
    pub gap: Option<f64>,
    pub spectrum: Spectrum,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.states.len()
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    /// Orthogonal projector `P` onto the band.
    pub fn projector(&self) -> HermitianOperator {
        let dim = self.layout.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for v in &self.states {
            m += v * v.adjoint();
        }
        HermitianOperator::from_symmetrized(self.layout.clone(), m)
    }

    /// `P / N`.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        DensityMatrix::uniform_mixture(self.layout.clone(), &self.states)
    }

    /// `|ψ⟩⟨ψ|` for a unique ground state, `P / N` otherwise.
    pub fn ground_state(&self) -> Result<DensityMatrix> {
        if self.states.len() == 1 {
            DensityMatrix::pure(self.layout.clone(), &self.states[0])
        } else {
            self.mixture()
        }
    }

    /// `n`-th eigenstate of the full spectrum (ascending energy).
    pub fn eigenstate(&self, n: usize) -> Result<DensityMatrix> {
        let vecs = &self.spectrum.eigenvectors;
        if n >= vecs.ncols() {
            return Err(Error::Size(format!("eigenstate index {n} exceeds dimension {}", vecs.ncols())));
        }
        DensityMatrix::pure(self.layout.clone(), &vecs.column(n).into_owned())
    }
}

/// Lowest eigenvalue, an orthonormal basis of the eigenspace within
/// `degeneracy_tol` of it, and the gap to the next level.
pub fn ground_space(hamiltonian: &LocalHamiltonian, degeneracy_tol: f64) -> Result<GroundSpace> {
    let h = hamiltonian.assemble()?;
    let spectrum = h.spectrum();
    let energy = spectrum.eigenvalues[0];
    let band = spectrum.eigenvalues.iter().take_while(|&&e| e - energy <= degeneracy_tol).count();
    let states = (0..band).map(|k| spectrum.eigenvectors.column(k).into_owned()).collect();
    let gap = spectrum.eigenvalues.get(band).map(|e| e - energy);
    Ok(GroundSpace { layout: h.layout().clone(), energy, states, gap, spectrum })
}

/// Gibbs state `e^{−H/T} / Z`. The exponent is shifted by the ground energy
/// before exponentiating.
pub fn thermal_state(hamiltonian: &LocalHamiltonian, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!("temperature {temperature} must be positive and finite")));
    }
    let h = hamiltonian.assemble()?;
    let e0 = h.spectrum().eigenvalues[0];
    let dim = h.dim();
    let shifted = h.sub(&HermitianOperator::identity(h.layout().clone()).scale(e0))?;
    let boltzmann = herm_expm(&shifted.scale(-1.0 / temperature));
    let z = boltzmann.trace();
    let rho = boltzmann.scale(1.0 / z);
    debug_assert_eq!(rho.dim(), dim);
    DensityMatrix::new(rho)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_tfim_chain, build_toric_code_2x2, toric_stabilizers, ChainGeometry};
    use crate::linalg::{trace_norm_distance, Geometry};
    use crate::C64;

    #[test]
    fn classical_ising_pair() {
        let h = build_tfim_chain(2, 1.0, 0.0, ChainGeometry::Ring).unwrap();
        let gs = ground_space(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-12);
        assert_eq!(gs.degeneracy(), 2);
    }

    #[test]
    fn free_spins_pair() {
        let h = build_tfim_chain(2, 0.0, 1.0, ChainGeometry::Ring).unwrap();
        let gs = ground_space(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert!((gs.energy + 2.0).abs() < 1e-12);
        assert_eq!(gs.degeneracy(), 1);
        // |++⟩ has amplitude 1/2 everywhere up to a global phase.
        let psi = &gs.states[0];
        let phase = psi[0] / crate::math::abs(psi[0]);
        for a in psi.iter() {
            assert!(crate::math::abs(a / phase - C64::new(0.5, 0.0)) < 1e-10);
        }
        assert!((gs.gap.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chain_length_limits() {
        assert!(matches!(build_tfim_chain(1, 1.0, 1.0, ChainGeometry::Ring), Err(Error::Size(_))));
        assert!(matches!(build_tfim_chain(13, 1.0, 1.0, ChainGeometry::Open), Err(Error::Size(_))));
    }

    #[test]
    fn tfim_terms_are_local_and_sum_to_h() {
        let h = build_tfim_chain(5, 0.7, 1.3, ChainGeometry::Ring).unwrap();
        assert_eq!(h.terms().len(), 5);
        assert_eq!(h.range(), 1);
        assert_eq!(h.max_support_len(), 2);
        // Z_x Z_{x+1} and X_x anticommute, so ‖H_x‖ = sqrt(J² + h²).
        assert!((h.max_term_norm() - (0.7f64.powi(2) + 1.3f64.powi(2)).sqrt()).abs() < 1e-12);
        let open = build_tfim_chain(5, 0.7, 1.3, ChainGeometry::Open).unwrap();
        assert_eq!(open.terms().last().unwrap().layout().sites(), &[4]);
    }

    #[test]
    fn toric_code_spectrum() {
        let h = build_toric_code_2x2().unwrap();
        assert_eq!(h.layout().dim(), 256);
        assert_eq!(h.terms().len(), 4);
        assert!((h.max_term_norm() - 2.0).abs() < 1e-12);
        let gs = ground_space(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(gs.degeneracy(), 4);
        assert!((gs.energy + 8.0).abs() < 1e-10);
        assert!((gs.gap.unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn toric_stabilizers_commute() {
        let layout = SystemLayout::qubits(Geometry::Torus2d { linear_size: 2 }).unwrap();
        let stab = toric_stabilizers(2);
        let ops: Vec<_> = stab
            .stars
            .iter()
            .chain(&stab.plaquettes)
            .map(|p| p.to_operator(&layout).unwrap())
            .collect();
        for a in &ops {
            for b in &ops {
                let c = a.commutator(b).unwrap();
                assert!(c.iter().all(|z| *z == C64::new(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn two_level_gibbs_populations() {
        // H = diag(0, Δ) on a single site.
        let layout = SystemLayout::qubits(Geometry::OpenChain { len: 1 }).unwrap();
        let delta = 1.7;
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = C64::new(delta, 0.0);
        let term = HermitianOperator::new(layout.clone(), m).unwrap();
        let h = LocalHamiltonian::new(layout, alloc::vec![term], 0).unwrap();
        let rho = thermal_state(&h, delta / core::f64::consts::LN_2).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 2.0 / 3.0).abs() < 1e-12);
        assert!((rho.matrix()[(1, 1)].re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature_limit() {
        let h = build_tfim_chain(4, 1.0, 0.5, ChainGeometry::Ring).unwrap();
        let rho = thermal_state(&h, 1e6).unwrap();
        let mixed = DensityMatrix::maximally_mixed(h.layout().clone());
        assert!(trace_norm_distance(&rho, &mixed).unwrap() <= 1e-4);
        assert!(matches!(thermal_state(&h, 0.0), Err(Error::Domain(_))));
        assert!(matches!(thermal_state(&h, -1.0), Err(Error::Domain(_))));
    }
}
