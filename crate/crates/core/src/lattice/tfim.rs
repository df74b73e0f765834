use alloc::format;
use alloc::vec::Vec;

use super::LocalHamiltonian;
use crate::linalg::{Geometry, SystemLayout};
use crate::marginals::{Pauli, PauliString};
use crate::{Error, Result};

pub const MAX_CHAIN_LENGTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainGeometry {
    Ring,
    Open,
}

impl ChainGeometry {
    pub fn geometry(self, len: usize) -> Geometry {
        match self {
            ChainGeometry::Ring => Geometry::Ring { len },
            ChainGeometry::Open => Geometry::OpenChain { len },
        }
    }
}

/// `H = −J Σ Z_i Z_{i+1} − h Σ X_i`, grouped per site as
/// `H_x = −J Z_x Z_{x+1} − h X_x` so there are `L` terms.
///
/// On a two-site ring the bonds `(0,1)` and `(1,0)` coincide and are counted once.
pub fn build_tfim_chain(len: usize, coupling: f64, field: f64, geometry: ChainGeometry) -> Result<LocalHamiltonian> {
    if !(2..=MAX_CHAIN_LENGTH).contains(&len) {
        return Err(Error::Size(format!("chain length {len} outside [2, {MAX_CHAIN_LENGTH}]")));
    }
    let layout = SystemLayout::qubits(geometry.geometry(len))?;
    let mut terms = Vec::with_capacity(len);
    for x in 0..len {
        let next = x + 1;
        let bond = match geometry {
            ChainGeometry::Ring if len > 2 || next < len => Some(next % len),
            ChainGeometry::Open if next < len => Some(next),
            _ => None,
        };
        let support: Vec<usize> = match bond {
            Some(y) => alloc::vec![x, y],
            None => alloc::vec![x],
        };
        let sub = layout.subsystem(&support)?;
        let mut term = PauliString::single(x, Pauli::X).to_operator(&sub)?.scale(-field);
        if let Some(y) = bond {
            let zz = PauliString::new([(x, Pauli::Z), (y, Pauli::Z)])?.to_operator(&sub)?;
            term = term.add(&zz.scale(-coupling))?;
        }
        terms.push(term);
    }
    LocalHamiltonian::new(layout, terms, 1)
}
