//! On-disk formats: system layouts, density matrices and constraint sets
//! (stored local data).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use maxent_core::lattice::RegionSet;
use maxent_core::linalg::{DensityMatrix, Geometry, HermitianOperator, SystemLayout};
use maxent_core::marginals::{ConstraintSet, Pauli, PauliString};
use maxent_core::{CMatrix, Complex};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;
use crate::json::{self, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    Ring { len: usize },
    OpenChain { len: usize },
    Torus2d { linear_size: usize },
}

impl From<Geometry> for GeometrySpec {
    fn from(g: Geometry) -> Self {
        match g {
            Geometry::Ring { len } => GeometrySpec::Ring { len },
            Geometry::OpenChain { len } => GeometrySpec::OpenChain { len },
            Geometry::Torus2d { linear_size } => GeometrySpec::Torus2d { linear_size },
        }
    }
}

impl From<GeometrySpec> for Geometry {
    fn from(g: GeometrySpec) -> Self {
        match g {
            GeometrySpec::Ring { len } => Geometry::Ring { len },
            GeometrySpec::OpenChain { len } => Geometry::OpenChain { len },
            GeometrySpec::Torus2d { linear_size } => Geometry::Torus2d { linear_size },
        }
    }
}

/// A full layout: every site of the geometry, in id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSpec {
    pub geometry: GeometrySpec,
    pub local_dim: usize,
}

impl LayoutSpec {
    pub fn of(layout: &SystemLayout) -> Result<Self, CliError> {
        if layout.num_sites() != layout.geometry().site_count() {
            return Err(CliError::Format("only full-system layouts can be stored".into()));
        }
        Ok(Self { geometry: layout.geometry().into(), local_dim: layout.local_dim() })
    }

    pub fn build(&self) -> Result<SystemLayout, CliError> {
        Ok(SystemLayout::new(self.geometry.into(), self.local_dim)?)
    }
}

/// Pauli string as `{"site": "letter"}`, written in site order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliEntry(pub PauliString);

impl Serialize for PauliEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let letters = self.0.letters();
        let mut map = serializer.serialize_map(Some(letters.len()))?;
        for (site, p) in letters {
            map.serialize_entry(&site.to_string(), &p.symbol().to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for PauliEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut letters = Vec::with_capacity(raw.len());
        for (site, letter) in raw {
            let site: usize = site.parse().map_err(|_| D::Error::custom(format!("bad site index {site:?}")))?;
            let mut chars = letter.chars();
            let p = match (chars.next(), chars.next()) {
                (Some(c), None) => Pauli::from_symbol(c),
                _ => None,
            }
            .ok_or_else(|| D::Error::custom(format!("bad Pauli letter {letter:?}")))?;
            letters.push((site, p));
        }
        PauliString::new(letters).map(PauliEntry).map_err(D::Error::custom)
    }
}

/// Stored local data: enough to rerun a reconstruction without the state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    pub schema_version: u32,
    pub layout: LayoutSpec,
    pub regions: Vec<Vec<usize>>,
    pub basis: Vec<PauliEntry>,
    pub targets: Vec<f64>,
}

impl ConstraintFile {
    pub fn of(cs: &ConstraintSet) -> Result<Self, CliError> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            layout: LayoutSpec::of(cs.layout())?,
            regions: cs.regions().regions().to_vec(),
            basis: cs.basis().iter().cloned().map(PauliEntry).collect(),
            targets: cs.targets().to_vec(),
        })
    }

    pub fn build(self) -> Result<ConstraintSet, CliError> {
        check_version(self.schema_version)?;
        let layout = self.layout.build()?;
        let regions = RegionSet::new(&layout, self.regions)?;
        let basis = self.basis.into_iter().map(|p| p.0).collect();
        Ok(ConstraintSet::new(layout, regions, basis, self.targets)?)
    }
}

/// Dense density matrix as separate real and imaginary row arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub schema_version: u32,
    pub layout: LayoutSpec,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityFile {
    pub fn of(rho: &DensityMatrix) -> Result<Self, CliError> {
        let m = rho.matrix();
        let rows = |f: fn(&Complex<f64>) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect()).collect()
        };
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            layout: LayoutSpec::of(rho.layout())?,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        })
    }

    pub fn build(self) -> Result<DensityMatrix, CliError> {
        check_version(self.schema_version)?;
        let layout = self.layout.build()?;
        let dim = layout.dim();
        let square = |rows: &[Vec<f64>]| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
        if !square(&self.re) || !square(&self.im) {
            return Err(CliError::Format(format!("density matrix must be {dim}x{dim}")));
        }
        let m = CMatrix::from_fn(dim, dim, |r, c| Complex::new(self.re[r][c], self.im[r][c]));
        Ok(DensityMatrix::new(HermitianOperator::new(layout, m)?)?)
    }
}

fn check_version(v: u32) -> Result<(), CliError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::Format(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")))
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), source: e })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = json::to_string(value).map_err(|e| CliError::Format(e.to_string()))?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_constraints(path: &Path) -> Result<ConstraintSet, CliError> {
    read_json::<ConstraintFile>(path)?.build()
}

pub fn read_density(path: &Path) -> Result<DensityMatrix, CliError> {
    read_json::<DensityFile>(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_entries_round_trip() {
        let p = PauliString::new([(3, Pauli::Z), (0, Pauli::X), (11, Pauli::Y)]).unwrap();
        let s = serde_json::to_string(&PauliEntry(p.clone())).unwrap();
        assert_eq!(s, r#"{"0":"X","3":"Z","11":"Y"}"#);
        let back: PauliEntry = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, p);
        assert!(serde_json::from_str::<PauliEntry>(r#"{"0":"Q"}"#).is_err());
        assert!(serde_json::from_str::<PauliEntry>(r#"{"a":"X"}"#).is_err());
    }

    #[test]
    fn geometry_tags() {
        let s = serde_json::to_string(&LayoutSpec { geometry: GeometrySpec::Torus2d { linear_size: 2 }, local_dim: 2 })
            .unwrap();
        assert_eq!(s, r#"{"geometry":{"torus2d":{"linear_size":2}},"local_dim":2}"#);
    }

    #[test]
    fn constraint_file_round_trips_exactly() {
        use maxent_core::lattice::{build_tfim_chain, ground_space, intervals, ChainGeometry, DEFAULT_DEGENERACY_TOL};
        use maxent_core::marginals::constraints_from_state;
        let h = build_tfim_chain(4, 1.0, 0.8, ChainGeometry::Open).unwrap();
        let rho = ground_space(&h, DEFAULT_DEGENERACY_TOL).unwrap().ground_state().unwrap();
        let cs = constraints_from_state(&rho, &intervals(rho.layout(), 2).unwrap()).unwrap();
        let text = json::to_string(&ConstraintFile::of(&cs).unwrap()).unwrap();
        let back = serde_json::from_str::<ConstraintFile>(&text).unwrap().build().unwrap();
        assert_eq!(back.basis(), cs.basis());
        assert_eq!(back.targets(), cs.targets());
        assert_eq!(back.regions().regions(), cs.regions().regions());
    }
}
