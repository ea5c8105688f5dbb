//! JSON documents for boundary data.
//!
//! ```json
//! { "kind": "nonclassical", "schema_version": 1,
//!   "grid_x1": {"length": 1.0, "nodes": 33}, "grid_x2": {"length": 1.0, "nodes": 33},
//!   "corner": [[Z00, Z01, Z02, Z03], [Z10, Z11, Z12, Z13]],
//!   "edge_x1": [[Z20 at x1 nodes], [Z21], [Z22], [Z23]],
//!   "edge_x2": [[Z04 at x2 nodes], [Z14]],
//!   "warnings": [{"i": 0, "j": 0, "phi_side": .., "psi_side": ..}] }
//!
//! { "kind": "classical", "schema_version": 1, "grid_x1": .., "grid_x2": ..,
//!   "phi": [[phi1, phi1', .., phi1''''], [phi2, ..]],   // arrays over x2 nodes
//!   "psi": [[psi1, psi1', psi1''], .., [psi4, ..]] }   // arrays over x1 nodes
//! ```
//!
//! `warnings` is optional and only written by classical -> non-classical conversion.

use serde::{Deserialize, Serialize};

use crate::boundary_data::{ClassicalData, CornerMismatch, Jet1D, NonClassicalData};
use crate::error::{Error, Result};
use crate::field_grid::{Field1D, Grid1D};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDescriptor {
    pub length: f64,
    pub nodes: usize,
}

impl GridDescriptor {
    pub fn grid(&self) -> Result<Grid1D<f64>> {
        Grid1D::new(self.length, self.nodes)
    }
}

impl From<&Grid1D<f64>> for GridDescriptor {
    fn from(g: &Grid1D<f64>) -> Self {
        Self {
            length: g.length(),
            nodes: g.node_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarningDoc {
    pub i: usize,
    pub j: usize,
    pub phi_side: f64,
    pub psi_side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonClassicalDoc {
    pub schema_version: u32,
    pub grid_x1: GridDescriptor,
    pub grid_x2: GridDescriptor,
    pub corner: [[f64; 4]; 2],
    pub edge_x1: Vec<Vec<f64>>,
    pub edge_x2: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<WarningDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalDoc {
    pub schema_version: u32,
    pub grid_x1: GridDescriptor,
    pub grid_x2: GridDescriptor,
    pub phi: Vec<Vec<Vec<f64>>>,
    pub psi: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryDocument {
    Nonclassical(NonClassicalDoc),
    Classical(ClassicalDoc),
}

fn schema_err(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn fields(
    grid: Grid1D<f64>,
    arrays: &[Vec<f64>],
    what: &str,
    expect: usize,
) -> Result<Vec<Field1D<f64>>> {
    if arrays.len() != expect {
        return Err(Error::Schema(format!(
            "{what}: expected {expect} arrays, got {}",
            arrays.len()
        )));
    }
    arrays
        .iter()
        .map(|a| Field1D::new(grid, a.clone()).map_err(|e| Error::Schema(format!("{what}: {e}"))))
        .collect()
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Schema(format!("unsupported schema_version {v}")))
    }
}

impl BoundaryDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(schema_err)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_nonclassical(nc: &NonClassicalData<f64>, warnings: &[CornerMismatch<f64>]) -> Self {
        let grid = nc.grid();
        BoundaryDocument::Nonclassical(NonClassicalDoc {
            schema_version: SCHEMA_VERSION,
            grid_x1: (&grid.g1).into(),
            grid_x2: (&grid.g2).into(),
            corner: nc.corner,
            edge_x1: nc.edge_x1.iter().map(|f| f.values().to_vec()).collect(),
            edge_x2: nc.edge_x2.iter().map(|f| f.values().to_vec()).collect(),
            warnings: warnings
                .iter()
                .map(|w| WarningDoc {
                    i: w.i,
                    j: w.j,
                    phi_side: w.phi_side,
                    psi_side: w.psi_side,
                })
                .collect(),
        })
    }

    pub fn from_classical(c: &ClassicalData<f64>) -> Self {
        let grid = c.grid();
        let jets = |js: &[Jet1D<f64>]| -> Vec<Vec<Vec<f64>>> {
            js.iter()
                .map(|j| {
                    j.derivatives()
                        .iter()
                        .map(|f| f.values().to_vec())
                        .collect()
                })
                .collect()
        };
        BoundaryDocument::Classical(ClassicalDoc {
            schema_version: SCHEMA_VERSION,
            grid_x1: (&grid.g1).into(),
            grid_x2: (&grid.g2).into(),
            phi: jets(&c.phi),
            psi: jets(&c.psi),
        })
    }

    pub fn into_nonclassical(self) -> Result<NonClassicalData<f64>> {
        let BoundaryDocument::Nonclassical(doc) = self else {
            return Err(Error::Schema("expected a nonclassical document".into()));
        };
        check_version(doc.schema_version)?;
        let g1 = doc.grid_x1.grid().map_err(schema_err)?;
        let g2 = doc.grid_x2.grid().map_err(schema_err)?;
        let e1 = fields(g1, &doc.edge_x1, "edge_x1", 4)?;
        let e2 = fields(g2, &doc.edge_x2, "edge_x2", 2)?;
        NonClassicalData::new(
            doc.corner,
            e1.try_into().expect("length checked"),
            e2.try_into().expect("length checked"),
        )
        .map_err(schema_err)
    }

    pub fn into_classical(self) -> Result<ClassicalData<f64>> {
        let BoundaryDocument::Classical(doc) = self else {
            return Err(Error::Schema("expected a classical document".into()));
        };
        check_version(doc.schema_version)?;
        let g1 = doc.grid_x1.grid().map_err(schema_err)?;
        let g2 = doc.grid_x2.grid().map_err(schema_err)?;
        if doc.phi.len() != 2 || doc.psi.len() != 4 {
            return Err(Error::Schema(
                "classical data needs 2 phi and 4 psi jets".into(),
            ));
        }
        let jet = |grid, arrays: &Vec<Vec<f64>>, what: &str, orders| -> Result<Jet1D<f64>> {
            Jet1D::new(fields(grid, arrays, what, orders)?).map_err(schema_err)
        };
        let phi = [
            jet(g2, &doc.phi[0], "phi1", 5)?,
            jet(g2, &doc.phi[1], "phi2", 5)?,
        ];
        let psi = [
            jet(g1, &doc.psi[0], "psi1", 3)?,
            jet(g1, &doc.psi[1], "psi2", 3)?,
            jet(g1, &doc.psi[2], "psi3", 3)?,
            jet(g1, &doc.psi[3], "psi4", 3)?,
        ];
        ClassicalData::new(phi, psi).map_err(schema_err)
    }
}
