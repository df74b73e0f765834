use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{Geometry, SystemLayout};
use crate::{Error, Result};

/// Covering family of regions `{A_i}` with `∪ A_i` = all sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSet {
    regions: Vec<Vec<usize>>,
    window: Option<usize>,
}

impl RegionSet {
    /// Regions are stored sorted and deduplicated; they must cover `layout`.
    pub fn new(layout: &SystemLayout, regions: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(layout, regions, None)
    }

    fn build(layout: &SystemLayout, regions: Vec<Vec<usize>>, window: Option<usize>) -> Result<Self> {
        let mut cleaned: Vec<Vec<usize>> = Vec::with_capacity(regions.len());
        for mut r in regions {
            layout.positions(&r)?;
            r.sort_unstable();
            if !cleaned.contains(&r) {
                cleaned.push(r);
            }
        }
        for &site in layout.sites() {
            if !cleaned.iter().any(|r| r.contains(&site)) {
                return Err(Error::Layout(format!("site {site} is not covered by any region")));
            }
        }
        Ok(Self { regions: cleaned, window })
    }

    pub fn regions(&self) -> &[Vec<usize>] {
        &self.regions
    }

    /// Interval length when generated by [`intervals`].
    pub fn window(&self) -> Option<usize> {
        self.window
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    /// Indices of regions containing every site of `support`.
    pub fn containing(&self, support: &[usize]) -> Vec<usize> {
        self.regions
            .iter()
            .enumerate()
            .filter(|(_, r)| support.iter().all(|s| r.contains(s)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// All intervals of `window` consecutive sites: `L` cyclic intervals on a ring,
/// `L − window + 1` on an open chain.
pub fn intervals(layout: &SystemLayout, window: usize) -> Result<RegionSet> {
    let geometry = layout.geometry();
    let len = geometry.linear_size();
    if layout.num_sites() != geometry.site_count() {
        return Err(Error::Layout("intervals need the full chain layout".into()));
    }
    if window == 0 || window > len {
        return Err(Error::Size(format!("interval length {window} outside [1, {len}]")));
    }
    let regions: Vec<Vec<usize>> = match geometry {
        Geometry::Ring { .. } => (0..len).map(|s| (0..window).map(|k| (s + k) % len).collect()).collect(),
        Geometry::OpenChain { .. } => (0..=len - window).map(|s| (s..s + window).collect()).collect(),
        Geometry::Torus2d { .. } => {
            return Err(Error::Domain("intervals are defined for chains; use stabilizer_regions on a torus".into()))
        }
    };
    RegionSet::build(layout, regions, Some(window))
}
