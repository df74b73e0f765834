//! Local data: Pauli bases on region covers, target expectations, and marginal
//! consistency of candidate states.

mod pauli;

pub use pauli::{strings_on, Pauli, PauliMasks, PauliString};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::lattice::RegionSet;
use crate::linalg::{partial_trace, trace_norm_distance, DensityMatrix, HermitianOperator, SystemLayout};
use crate::{CMatrix, Error, Result, C64};

/// Every non-identity Pauli string supported inside some region, each once,
/// sorted by support then letters.
pub fn region_basis(layout: &SystemLayout, regions: &RegionSet) -> Result<Vec<PauliString>> {
    if layout.local_dim() != 2 {
        return Err(Error::UnsupportedDimension(layout.local_dim()));
    }
    let mut set = BTreeSet::new();
    for region in regions.regions() {
        layout.positions(region)?;
        set.extend(strings_on(region));
    }
    Ok(set.into_iter().collect())
}

/// Pauli basis with target expectations `c_i = tr(ρ O_i)`.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    layout: SystemLayout,
    regions: RegionSet,
    basis: Vec<PauliString>,
    targets: Vec<f64>,
    provenance: Vec<Vec<usize>>,
    masks: Vec<PauliMasks>,
}

/// Slack on `|c_i| ≤ 1`.
const TARGET_BOUND_SLACK: f64 = 1e-12;

impl ConstraintSet {
    pub fn new(
        layout: SystemLayout,
        regions: RegionSet,
        basis: Vec<PauliString>,
        targets: Vec<f64>,
    ) -> Result<Self> {
        if basis.len() != targets.len() {
            return Err(Error::Layout(format!(
                "{} basis elements but {} targets",
                basis.len(),
                targets.len()
            )));
        }
        let mut seen = BTreeSet::new();
        let mut provenance = Vec::with_capacity(basis.len());
        let mut masks = Vec::with_capacity(basis.len());
        for (p, &c) in basis.iter().zip(&targets) {
            if p.is_identity() {
                return Err(Error::Layout("identity is not a constraint".into()));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::Layout(format!("duplicate basis element {p}")));
            }
            let owners = regions.containing(&p.support());
            if owners.is_empty() {
                return Err(Error::Layout(format!("{p} is not supported inside any region")));
            }
            if !(c.abs() <= 1.0 + TARGET_BOUND_SLACK) {
                return Err(Error::Invariant(format!("target {c} for {p} outside [-1, 1]")));
            }
            provenance.push(owners);
            masks.push(p.masks(&layout)?);
        }
        Ok(Self { layout, regions, basis, targets, provenance, masks })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn regions(&self) -> &RegionSet {
        &self.regions
    }

    pub fn basis(&self) -> &[PauliString] {
        &self.basis
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Indices into [`Self::regions`] containing each basis element.
    pub fn provenance(&self) -> &[Vec<usize>] {
        &self.provenance
    }

    pub fn masks(&self) -> &[PauliMasks] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn target_of(&self, p: &PauliString) -> Option<f64> {
        self.basis.binary_search(p).ok().map(|i| self.targets[i])
    }

    /// `⟨O_i⟩` in `state`.
    pub fn expectations_in(&self, state: &DensityMatrix) -> Result<Vec<f64>> {
        self.layout.ensure_compatible(state.layout())?;
        Ok(self.masks.iter().map(|m| m.expectation(state.matrix())).collect())
    }

    /// `max_i |c_i − ⟨O_i⟩|`.
    pub fn residual(&self, state: &DensityMatrix) -> Result<f64> {
        let got = self.expectations_in(state)?;
        Ok(got.iter().zip(&self.targets).fold(0.0, |acc, (g, c)| acc.max((g - c).abs())))
    }

    /// Region density matrices rebuilt from the targets by Pauli inversion,
    /// `ρ_A = 2^{−|A|} (1 + Σ_{P ⊆ A} c_P P)`.
    pub fn region_states(&self) -> Result<Vec<(Vec<usize>, DensityMatrix)>> {
        self.regions
            .regions()
            .iter()
            .map(|region| {
                let sub = self.layout.subsystem(region)?;
                let dim = sub.dim();
                let mut m = CMatrix::identity(dim, dim);
                for p in strings_on(region) {
                    let c = self.target_of(&p).ok_or_else(|| {
                        Error::Layout(format!("basis is missing {p} needed for region {region:?}"))
                    })?;
                    p.masks(&sub)?.accumulate(&mut m, c);
                }
                m /= C64::new(dim as f64, 0.0);
                Ok((region.clone(), DensityMatrix::new(HermitianOperator::new(sub, m)?)?))
            })
            .collect()
    }
}

/// Targets `c_i = tr(ρ O_i)` for every element of `basis`.
pub fn extract_constraints(rho: &DensityMatrix, regions: &RegionSet, basis: Vec<PauliString>) -> Result<ConstraintSet> {
    let layout = rho.layout().clone();
    let targets = basis
        .iter()
        .map(|p| Ok(p.masks(&layout)?.expectation(rho.matrix())))
        .collect::<Result<Vec<f64>>>()?;
    ConstraintSet::new(layout, regions.clone(), basis, targets)
}

/// Complete local data of `rho` on `regions`.
pub fn constraints_from_state(rho: &DensityMatrix, regions: &RegionSet) -> Result<ConstraintSet> {
    let basis = region_basis(rho.layout(), regions)?;
    extract_constraints(rho, regions, basis)
}

/// `max_A ‖tr_{Ā} candidate − ρ_A‖₁` over the given target marginals.
pub fn marginal_error(candidate: &DensityMatrix, targets: &[(Vec<usize>, DensityMatrix)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (region, target) in targets {
        let reduced = partial_trace(candidate, region)?;
        worst = worst.max(trace_norm_distance(&reduced, target)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::intervals;
    use crate::linalg::{reduced_states, Geometry};

    fn ring(n: usize) -> SystemLayout {
        SystemLayout::qubits(Geometry::Ring { len: n }).unwrap()
    }

    #[test]
    fn single_site_basis() {
        let l = ring(2);
        let regions = RegionSet::new(&l, alloc::vec![alloc::vec![0], alloc::vec![1]]).unwrap();
        let basis = region_basis(&l, &regions).unwrap();
        assert_eq!(basis.len(), 6);
        let expected: Vec<PauliString> = Pauli::ALL.iter().map(|&p| PauliString::single(0, p)).collect();
        assert_eq!(&basis[..3], &expected[..]);
    }

    #[test]
    fn full_system_basis_count() {
        let l = ring(3);
        let basis = region_basis(&l, &intervals(&l, 3).unwrap()).unwrap();
        assert_eq!(basis.len(), 63);
    }

    #[test]
    fn maximally_mixed_targets_vanish() {
        let l = ring(4);
        let rho = DensityMatrix::maximally_mixed(l.clone());
        let cs = constraints_from_state(&rho, &intervals(&l, 2).unwrap()).unwrap();
        assert!(cs.targets().iter().all(|&c| c.abs() < 1e-15));
    }

    #[test]
    fn all_zero_state_targets() {
        let l = ring(4);
        let rho = DensityMatrix::computational(l.clone(), &[0, 0, 0, 0]).unwrap();
        let cs = constraints_from_state(&rho, &intervals(&l, 2).unwrap()).unwrap();
        for (p, &c) in cs.basis().iter().zip(cs.targets()) {
            let all_z = p.letters().iter().all(|&(_, q)| q == Pauli::Z);
            assert_eq!(c, if all_z { 1.0 } else { 0.0 }, "{p}");
        }
    }

    #[test]
    fn region_states_match_partial_traces() {
        let l = ring(3);
        let rho = DensityMatrix::computational(l.clone(), &[1, 0, 1]).unwrap();
        let regions = intervals(&l, 2).unwrap();
        let cs = constraints_from_state(&rho, &regions).unwrap();
        let rebuilt = cs.region_states().unwrap();
        let direct = reduced_states(&rho, regions.regions()).unwrap();
        for ((ra, a), (rb, b)) in rebuilt.iter().zip(&direct) {
            assert_eq!(ra, rb);
            assert!(trace_norm_distance(a, b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn marginal_error_closed_forms() {
        let l = ring(3);
        let rho = DensityMatrix::computational(l.clone(), &[0, 0, 0]).unwrap();
        let regions = intervals(&l, 1).unwrap();
        let targets = reduced_states(&rho, regions.regions()).unwrap();
        assert!(marginal_error(&rho, &targets).unwrap() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(l);
        assert!((marginal_error(&mixed, &targets).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constraint_set_rejects_bad_input() {
        let l = ring(3);
        let regions = intervals(&l, 1).unwrap();
        let x0 = PauliString::single(0, Pauli::X);
        let x0x1 = PauliString::new([(0, Pauli::X), (1, Pauli::X)]).unwrap();
        assert!(ConstraintSet::new(l.clone(), regions.clone(), alloc::vec![x0.clone(), x0.clone()], alloc::vec![0.0, 0.0]).is_err());
        assert!(ConstraintSet::new(l.clone(), regions.clone(), alloc::vec![x0x1], alloc::vec![0.0]).is_err());
        assert!(ConstraintSet::new(l.clone(), regions.clone(), alloc::vec![x0.clone()], alloc::vec![1.5]).is_err());
        assert!(ConstraintSet::new(l, regions, alloc::vec![x0], alloc::vec![0.5]).is_ok());
    }
}
