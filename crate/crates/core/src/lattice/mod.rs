//! Local Hamiltonians, region covers, ground spaces and Gibbs states.

mod ground;
mod regions;
mod tfim;
mod toric;

pub use ground::{ground_space, thermal_state, GroundSpace, DEFAULT_DEGENERACY_TOL};
pub use regions::{intervals, RegionSet};
pub use tfim::{build_tfim_chain, ChainGeometry, MAX_CHAIN_LENGTH};
pub use toric::{build_toric_code, build_toric_code_2x2, stabilizer_regions, toric_stabilizers, ToricStabilizers};

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{tensor_embed, HermitianOperator, SystemLayout};
use crate::{Error, Result};

/// `H = Σ_x H_x` with every term acting on a bounded region.
#[derive(Debug, Clone)]
pub struct LocalHamiltonian {
    layout: SystemLayout,
    terms: Vec<HermitianOperator>,
    range: usize,
}

impl LocalHamiltonian {
    /// Each term is given on its own support (a subsystem layout). `range` is
    /// the largest allowed support diameter.
    pub fn new(layout: SystemLayout, terms: Vec<HermitianOperator>, range: usize) -> Result<Self> {
        let geometry = layout.geometry();
        for term in &terms {
            let support = term.layout().sites();
            layout.positions(support)?;
            let diameter = geometry.diameter(support);
            if diameter > range {
                return Err(Error::Layout(format!(
                    "term on {support:?} has diameter {diameter} > range {range}"
                )));
            }
        }
        Ok(Self { layout, terms, range })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn terms(&self) -> &[HermitianOperator] {
        &self.terms
    }

    /// Largest support diameter allowed for a term (`R_0`).
    pub fn range(&self) -> usize {
        self.range
    }

    /// Number of sites in the widest term support.
    pub fn max_support_len(&self) -> usize {
        self.terms.iter().map(|t| t.layout().num_sites()).max().unwrap_or(0)
    }

    /// `max_x ‖H_x‖` in operator norm.
    pub fn max_term_norm(&self) -> f64 {
        self.terms.iter().map(HermitianOperator::operator_norm).fold(0.0, f64::max)
    }

    /// Dense `Σ_x tensor_embed(H_x)`.
    pub fn assemble(&self) -> Result<HermitianOperator> {
        let mut total = HermitianOperator::zeros(self.layout.clone());
        for term in &self.terms {
            total = total.add(&tensor_embed(term, &self.layout)?)?;
        }
        Ok(total)
    }
}
