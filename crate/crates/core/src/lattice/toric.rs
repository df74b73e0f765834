use alloc::vec::Vec;

use super::{LocalHamiltonian, RegionSet};
use crate::linalg::{Geometry, SystemLayout};
use crate::marginals::{Pauli, PauliString};
use crate::Result;

/// Star (`A_v`, all-X) and plaquette (`B_p`, all-Z) operators, indexed by the
/// vertex `x + L y` (plaquettes by their lower-left corner).
#[derive(Debug, Clone)]
pub struct ToricStabilizers {
    pub stars: Vec<PauliString>,
    pub plaquettes: Vec<PauliString>,
}

fn horizontal(x: usize, y: usize, l: usize) -> usize {
    2 * ((x % l) + l * (y % l))
}

fn vertical(x: usize, y: usize, l: usize) -> usize {
    2 * ((x % l) + l * (y % l)) + 1
}

fn star_support(x: usize, y: usize, l: usize) -> [usize; 4] {
    [
        horizontal(x, y, l),
        horizontal(x + l - 1, y, l),
        vertical(x, y, l),
        vertical(x, y + l - 1, l),
    ]
}

fn plaquette_support(x: usize, y: usize, l: usize) -> [usize; 4] {
    [horizontal(x, y, l), horizontal(x, y + 1, l), vertical(x, y, l), vertical(x + 1, y, l)]
}

pub fn toric_stabilizers(linear_size: usize) -> ToricStabilizers {
    let l = linear_size;
    let mut stars = Vec::with_capacity(l * l);
    let mut plaquettes = Vec::with_capacity(l * l);
    for y in 0..l {
        for x in 0..l {
            let s = star_support(x, y, l).map(|e| (e, Pauli::X));
            let p = plaquette_support(x, y, l).map(|e| (e, Pauli::Z));
            stars.push(PauliString::new(s).expect("star edges are distinct"));
            plaquettes.push(PauliString::new(p).expect("plaquette edges are distinct"));
        }
    }
    ToricStabilizers { stars, plaquettes }
}

/// `H = −Σ_v A_v − Σ_p B_p` on the edges of an `L × L` torus, grouped per
/// vertex as `H_v = −A_v − B_{p(v)}` so there are `L²` terms.
pub fn build_toric_code(linear_size: usize) -> Result<LocalHamiltonian> {
    let layout = SystemLayout::qubits(Geometry::Torus2d { linear_size })?;
    let stab = toric_stabilizers(linear_size);
    let mut terms = Vec::with_capacity(stab.stars.len());
    let mut range = 0;
    for (star, plaq) in stab.stars.iter().zip(&stab.plaquettes) {
        let mut support = star.support();
        support.extend(plaq.support());
        support.sort_unstable();
        support.dedup();
        range = range.max(layout.geometry().diameter(&support));
        let sub = layout.subsystem(&support)?;
        let a = star.to_operator(&sub)?;
        let b = plaq.to_operator(&sub)?;
        terms.push(a.add(&b)?.scale(-1.0));
    }
    LocalHamiltonian::new(layout, terms, range)
}

/// The 8-qubit toric code on a 2×2 torus.
pub fn build_toric_code_2x2() -> Result<LocalHamiltonian> {
    build_toric_code(2)
}

/// Regions given by each star and each plaquette support.
pub fn stabilizer_regions(layout: &SystemLayout) -> Result<RegionSet> {
    let l = layout.geometry().linear_size();
    let stab = toric_stabilizers(l);
    let regions = stab.stars.iter().chain(&stab.plaquettes).map(PauliString::support).collect();
    RegionSet::new(layout, regions)
}
