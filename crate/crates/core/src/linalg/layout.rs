use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default cap on the total Hilbert dimension (12 qubits).
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Lattice geometry underlying a layout.
///
/// Rings and open chains place one site per lattice point. The 2D torus places
/// one site per edge: edge `2 (x + L y)` is horizontal, leaving vertex `(x, y)`
/// in the +x direction, and edge `2 (x + L y) + 1` is vertical (+y).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Ring { len: usize },
    OpenChain { len: usize },
    Torus2d { linear_size: usize },
}

impl Geometry {
    pub fn linear_size(&self) -> usize {
        match *self {
            Geometry::Ring { len } | Geometry::OpenChain { len } => len,
            Geometry::Torus2d { linear_size } => linear_size,
        }
    }

    pub fn spatial_dimension(&self) -> u32 {
        match self {
            Geometry::Torus2d { .. } => 2,
            _ => 1,
        }
    }

    /// `L^D`, the number of lattice cells.
    pub fn volume(&self) -> usize {
        self.linear_size().pow(self.spatial_dimension())
    }

    pub fn site_count(&self) -> usize {
        match *self {
            Geometry::Ring { len } | Geometry::OpenChain { len } => len,
            Geometry::Torus2d { linear_size } => 2 * linear_size * linear_size,
        }
    }

    /// Geometric distance between two site ids: cyclic on rings, Chebyshev
    /// distance between doubled edge midpoints on the torus.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        match *self {
            Geometry::Ring { len } => cyclic(a, b, len),
            Geometry::OpenChain { .. } => a.abs_diff(b),
            Geometry::Torus2d { linear_size } => {
                let (ax, ay) = torus_midpoint(a, linear_size);
                let (bx, by) = torus_midpoint(b, linear_size);
                let period = 2 * linear_size;
                cyclic(ax, bx, period).max(cyclic(ay, by, period))
            }
        }
    }

    /// Largest pairwise distance within `sites`.
    pub fn diameter(&self, sites: &[usize]) -> usize {
        let mut best = 0;
        for (i, &a) in sites.iter().enumerate() {
            for &b in &sites[i + 1..] {
                best = best.max(self.distance(a, b));
            }
        }
        best
    }
}

fn cyclic(a: usize, b: usize, period: usize) -> usize {
    let d = a.abs_diff(b) % period;
    d.min(period - d)
}

fn torus_midpoint(edge: usize, l: usize) -> (usize, usize) {
    let cell = edge / 2;
    let (x, y) = (cell % l, cell / l);
    if edge.is_multiple_of(2) {
        (2 * x + 1, 2 * y)
    } else {
        (2 * x, 2 * y + 1)
    }
}

/// Ordered set of sites with a uniform local dimension.
///
/// The order of `sites` fixes the tensor-factor order of every operator on the
/// layout: the first site is the most significant factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLayout {
    sites: Vec<usize>,
    local_dim: usize,
    geometry: Geometry,
    dimension_cap: usize,
}

impl SystemLayout {
    /// All sites of `geometry`, in id order.
    pub fn new(geometry: Geometry, local_dim: usize) -> Result<Self> {
        Self::with_dimension_cap(geometry, local_dim, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_dimension_cap(geometry: Geometry, local_dim: usize, cap: usize) -> Result<Self> {
        let sites = (0..geometry.site_count()).collect();
        Self::from_sites(sites, local_dim, geometry, cap)
    }

    /// Qubit chain helper.
    pub fn qubits(geometry: Geometry) -> Result<Self> {
        Self::new(geometry, 2)
    }

    fn from_sites(sites: Vec<usize>, local_dim: usize, geometry: Geometry, cap: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::Layout(format!("local dimension {local_dim} must be at least 2")));
        }
        let total = geometry.site_count();
        if let Some(&bad) = sites.iter().find(|&&s| s >= total) {
            return Err(Error::Layout(format!("site {bad} is not part of the geometry")));
        }
        let dim = u32::try_from(sites.len())
            .ok()
            .and_then(|n| local_dim.checked_pow(n))
            .unwrap_or(usize::MAX);
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        Ok(Self { sites, local_dim, geometry, dimension_cap: cap })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dimension_cap(&self) -> usize {
        self.dimension_cap
    }

    /// Total Hilbert dimension `d^n`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.sites.len() as u32)
    }

    /// Tensor-factor position of a site id.
    pub fn position(&self, site: usize) -> Option<usize> {
        self.sites.iter().position(|&s| s == site)
    }

    /// Positions of `sites`, failing on unknown or repeated ids.
    pub fn positions(&self, sites: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(sites.len());
        for &s in sites {
            let p = self
                .position(s)
                .ok_or_else(|| Error::Layout(format!("site {s} is not in the layout")))?;
            if out.contains(&p) {
                return Err(Error::Layout(format!("site {s} listed twice")));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Layout restricted to `keep`, preserving this layout's order.
    pub fn subsystem(&self, keep: &[usize]) -> Result<Self> {
        self.positions(keep)?;
        let sites = self.sites.iter().copied().filter(|s| keep.contains(s)).collect();
        Self::from_sites(sites, self.local_dim, self.geometry, self.dimension_cap)
    }

    /// Same sites and dimension; geometry and cap may differ.
    pub fn is_compatible(&self, other: &Self) -> bool {
        self.sites == other.sites && self.local_dim == other.local_dim
    }

    pub(crate) fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::Layout(format!(
                "layouts differ: sites {:?} (d={}) vs {:?} (d={})",
                self.sites, self.local_dim, other.sites, other.local_dim
            )))
        }
    }
}
