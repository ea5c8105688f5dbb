//! JSON run configuration (`schema_version: 1`).
//!
//! Relative paths inside a config resolve against the config file's directory.

use std::path::{Path, PathBuf};

use goursat_core::boundary_data::{to_nonclassical, CornerMismatch, NonClassicalData};
use goursat_core::field_grid::{Axis, Field1D, Field2D, Grid1D, Grid2D};
use goursat_core::mms::{ManufacturedSolution, PolySolution, TrigSolution};
use goursat_core::schema::BoundaryDocument;
use goursat_core::solver::{Coefficient, CoefficientSet, Method, SolverParams};
use goursat_core::MixedOrder;
use serde::Deserialize;

use crate::io;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn cfg_err(e: impl std::fmt::Display) -> ConfigError {
    ConfigError(e.to_string())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub domain: Domain,
    #[serde(default)]
    pub grid: Option<GridNodes>,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub coefficients: CoefficientConfig,
    #[serde(default)]
    pub oracle: Option<OracleConfig>,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub rhs: RhsConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub study: Option<StudyConfig>,
}

fn default_p() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub h1: f64,
    pub h2: f64,
}

impl Default for Domain {
    fn default() -> Self {
        Self { h1: 1.0, h2: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridNodes {
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X1,
    X2,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Self {
        match a {
            AxisName::X1 => Axis::X1,
            AxisName::X2 => Axis::X2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantEntry {
    pub order: [usize; 2],
    pub value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub order: [usize; 2],
    pub path: PathBuf,
}

fn default_order() -> [usize; 2] {
    [0, 0]
}

fn default_axis() -> AxisName {
    AxisName::X1
}

fn aller_a01() -> f64 {
    0.5
}

fn aller_a02() -> f64 {
    0.1
}

fn aller_a10() -> f64 {
    0.5
}

/// Coefficient presets. `aller` is a constant-coefficient set with
/// `a_01`, `a_02`, `a_10` non-zero; it is a label, not a calibrated model.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoefficientConfig {
    #[default]
    Zero,
    Constant {
        values: Vec<ConstantEntry>,
    },
    Aller {
        #[serde(default = "aller_a01")]
        a01: f64,
        #[serde(default = "aller_a02")]
        a02: f64,
        #[serde(default = "aller_a10")]
        a10: f64,
    },
    Step {
        #[serde(default = "default_order")]
        order: [usize; 2],
        #[serde(default = "default_axis")]
        axis: AxisName,
        jump: f64,
        left: f64,
        right: f64,
    },
    Table {
        entries: Vec<TableEntry>,
    },
}

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OracleConfig {
    Poly {
        coefficients: Vec<Vec<f64>>,
    },
    Trig {
        #[serde(default = "default_one")]
        amplitude: f64,
        #[serde(default = "default_one")]
        k1: f64,
        #[serde(default = "default_one")]
        k2: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
    },
}

impl OracleConfig {
    pub fn solution(&self) -> ManufacturedSolution<f64> {
        match self {
            OracleConfig::Poly { coefficients } => {
                ManufacturedSolution::Poly(PolySolution::new(coefficients.clone()))
            }
            OracleConfig::Trig {
                amplitude,
                k1,
                k2,
                c1,
                c2,
            } => ManufacturedSolution::Trig(TrigSolution {
                amplitude: *amplitude,
                k1: *k1,
                k2: *k2,
                c1: *c1,
                c2: *c2,
            }),
        }
    }
}

/// A 1-D trace: a constant, node values, or polynomial coefficients (ascending).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TraceSpec {
    Constant(f64),
    Values(Vec<f64>),
    Poly { poly: Vec<f64> },
}

impl Default for TraceSpec {
    fn default() -> Self {
        TraceSpec::Constant(0.0)
    }
}

impl TraceSpec {
    fn field(&self, grid: Grid1D<f64>, what: &str) -> Result<Field1D<f64>, ConfigError> {
        match self {
            TraceSpec::Constant(c) => Field1D::new(grid, vec![*c; grid.node_count()]),
            TraceSpec::Values(v) => Field1D::new(grid, v.clone()),
            TraceSpec::Poly { poly } => Field1D::new(
                grid,
                grid.nodes()
                    .iter()
                    .map(|&x| poly.iter().rev().fold(0.0, |acc, &c| acc * x + c))
                    .collect(),
            ),
        }
        .map_err(|e| ConfigError(format!("{what}: {e}")))
    }
}

/// A 2-D field: a constant, row-major node values, or `c[m][n] x1^m x2^n`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Constant(f64),
    Values(Vec<f64>),
    Poly { poly: Vec<Vec<f64>> },
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataConfig {
    #[default]
    Zero,
    Inline {
        #[serde(default)]
        corner: [[f64; 4]; 2],
        #[serde(default)]
        edge_x1: [TraceSpec; 4],
        #[serde(default)]
        edge_x2: [TraceSpec; 2],
    },
    ClassicalFile {
        path: PathBuf,
    },
    NonclassicalFile {
        path: PathBuf,
    },
    Oracle,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum RhsConfig {
    #[default]
    Zero,
    Inline {
        value: FieldSpec,
    },
    Oracle,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Picard,
    Marching,
}

fn default_tolerance() -> f64 {
    goursat_core::solver::DEFAULT_TOLERANCE
}

fn default_max_iterations() -> usize {
    goursat_core::solver::DEFAULT_MAX_ITERATIONS
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_method")]
    pub method: MethodName,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_method() -> MethodName {
    MethodName::Picard
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: default_method(),
            tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
        }
    }
}

impl SolverConfig {
    pub fn params(&self) -> SolverParams<f64> {
        SolverParams {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            method: match self.method {
                MethodName::Picard => Method::Picard,
                MethodName::Marching => Method::Marching,
            },
        }
    }
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_prefix() -> String {
    "run".into()
}

fn default_jet_orders() -> Vec<[usize; 2]> {
    vec![[0, 0]]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_prefix")]
    pub prefix: String,
    #[serde(default = "default_jet_orders")]
    pub jet_orders: Vec<[usize; 2]>,
    #[serde(default)]
    pub heatmap: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            prefix: default_prefix(),
            jet_orders: default_jet_orders(),
            heatmap: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceConfig {
    Exact,
    SelfConvergence { nodes: usize },
}

fn default_reference() -> ReferenceConfig {
    ReferenceConfig::Exact
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub grid_sizes: Vec<usize>,
    #[serde(default)]
    pub min_order: Option<f64>,
    #[serde(default)]
    pub max_order: Option<f64>,
    /// Upper bound on the largest jet sup error (`mms` verdict).
    #[serde(default)]
    pub max_error: Option<f64>,
    #[serde(default = "default_reference")]
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub reference_cache: Option<PathBuf>,
}

/// A parsed config together with the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let loaded = Self { config, base_dir };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.config;
        if c.schema_version != CONFIG_VERSION {
            return Err(ConfigError(format!(
                "unsupported schema_version {}",
                c.schema_version
            )));
        }
        if !(c.domain.h1 > 0.0
            && c.domain.h2 > 0.0
            && c.domain.h1.is_finite()
            && c.domain.h2.is_finite())
        {
            return Err(ConfigError("domain lengths must be positive".into()));
        }
        if let Some(g) = c.grid {
            if g.n1 < 3 || g.n2 < 3 {
                return Err(ConfigError("node counts must be at least 3".into()));
            }
        }
        if c.p.is_nan() || c.p < 1.0 {
            return Err(ConfigError(format!("p must lie in [1, inf], got {}", c.p)));
        }
        if c.solver.tolerance.is_nan() || c.solver.tolerance <= 0.0 || c.solver.max_iterations < 1 {
            return Err(ConfigError(
                "solver needs tolerance > 0 and max_iterations >= 1".into(),
            ));
        }
        for [i, j] in &c.output.jet_orders {
            MixedOrder::new(*i, *j).map_err(cfg_err)?;
        }
        let needs_oracle =
            matches!(c.data, DataConfig::Oracle) || matches!(c.rhs, RhsConfig::Oracle);
        if needs_oracle && c.oracle.is_none() {
            return Err(ConfigError(
                "data or rhs source `oracle` needs an `oracle` section".into(),
            ));
        }
        let mut files: Vec<&Path> = Vec::new();
        match &c.data {
            DataConfig::ClassicalFile { path } | DataConfig::NonclassicalFile { path } => {
                files.push(path)
            }
            _ => {}
        }
        if let CoefficientConfig::Table { entries } = &c.coefficients {
            files.extend(entries.iter().map(|e| e.path.as_path()));
        }
        for f in files {
            let full = self.resolve(f);
            if !full.is_file() {
                return Err(ConfigError(format!(
                    "referenced file {} does not exist",
                    full.display()
                )));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid2D<f64>, ConfigError> {
        let g = self
            .config
            .grid
            .ok_or_else(|| ConfigError("missing `grid` section".into()))?;
        self.grid_with(g.n1, g.n2)
    }

    pub fn grid_with(&self, n1: usize, n2: usize) -> Result<Grid2D<f64>, ConfigError> {
        let d = self.config.domain;
        Ok(Grid2D::new(
            Grid1D::new(d.h1, n1).map_err(cfg_err)?,
            Grid1D::new(d.h2, n2).map_err(cfg_err)?,
        ))
    }

    pub fn oracle(&self) -> Option<ManufacturedSolution<f64>> {
        self.config.oracle.as_ref().map(OracleConfig::solution)
    }

    pub fn coefficients(&self, grid: &Grid2D<f64>) -> Result<CoefficientSet<f64>, ConfigError> {
        let order = |[i, j]: [usize; 2]| MixedOrder::new(i, j).map_err(cfg_err);
        let mut set = CoefficientSet::zero();
        match &self.config.coefficients {
            CoefficientConfig::Zero => {}
            CoefficientConfig::Constant { values } => {
                for e in values {
                    set.set(order(e.order)?, Coefficient::Constant(e.value))
                        .map_err(cfg_err)?;
                }
            }
            CoefficientConfig::Aller { a01, a02, a10 } => {
                set.set(order([0, 1])?, Coefficient::Constant(*a01))
                    .map_err(cfg_err)?;
                set.set(order([0, 2])?, Coefficient::Constant(*a02))
                    .map_err(cfg_err)?;
                set.set(order([1, 0])?, Coefficient::Constant(*a10))
                    .map_err(cfg_err)?;
            }
            CoefficientConfig::Step {
                order: o,
                axis,
                jump,
                left,
                right,
            } => {
                let c = Coefficient::Step {
                    axis: (*axis).into(),
                    jump: *jump,
                    left: *left,
                    right: *right,
                };
                set.set(order(*o)?, c).map_err(cfg_err)?;
            }
            CoefficientConfig::Table { entries } => {
                for e in entries {
                    let field =
                        io::read_field_csv(&self.resolve(&e.path), grid).map_err(cfg_err)?;
                    set.set(order(e.order)?, Coefficient::Sampled(field))
                        .map_err(cfg_err)?;
                }
            }
        }
        Ok(set)
    }

    /// Non-classical data for `grid`, plus corner warnings when converted
    /// from a classical file.
    pub fn boundary_data(
        &self,
        grid: &Grid2D<f64>,
    ) -> Result<(NonClassicalData<f64>, Vec<CornerMismatch<f64>>), ConfigError> {
        let read_doc = |path: &Path| -> Result<BoundaryDocument, ConfigError> {
            let full = self.resolve(path);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| ConfigError(format!("{}: {e}", full.display())))?;
            BoundaryDocument::from_json(&text).map_err(cfg_err)
        };
        let (data, warnings) = match &self.config.data {
            DataConfig::Zero => (NonClassicalData::zeros(*grid), Vec::new()),
            DataConfig::Inline {
                corner,
                edge_x1,
                edge_x2,
            } => {
                let e1: Vec<_> = edge_x1
                    .iter()
                    .enumerate()
                    .map(|(j, t)| t.field(grid.g1, &format!("edge_x1[{j}]")))
                    .collect::<Result<_, _>>()?;
                let e2: Vec<_> = edge_x2
                    .iter()
                    .enumerate()
                    .map(|(i, t)| t.field(grid.g2, &format!("edge_x2[{i}]")))
                    .collect::<Result<_, _>>()?;
                let data = NonClassicalData::new(
                    *corner,
                    e1.try_into().expect("four traces"),
                    e2.try_into().expect("two traces"),
                )
                .map_err(cfg_err)?;
                (data, Vec::new())
            }
            DataConfig::ClassicalFile { path } => {
                let c = read_doc(path)?.into_classical().map_err(cfg_err)?;
                let out = to_nonclassical(&c);
                (out.data, out.warnings)
            }
            DataConfig::NonclassicalFile { path } => (
                read_doc(path)?.into_nonclassical().map_err(cfg_err)?,
                Vec::new(),
            ),
            DataConfig::Oracle => (
                self.oracle().expect("validated").nonclassical_data(grid),
                Vec::new(),
            ),
        };
        if data.grid() != *grid {
            return Err(ConfigError(
                "boundary data grid differs from the configured grid".into(),
            ));
        }
        Ok((data, warnings))
    }

    /// `Z_24` on `grid`. The oracle form adds the lower-order terms of `coefficients`.
    pub fn rhs(
        &self,
        grid: &Grid2D<f64>,
        coefficients: &CoefficientSet<f64>,
    ) -> Result<Field2D<f64>, ConfigError> {
        match &self.config.rhs {
            RhsConfig::Zero => Ok(Field2D::zeros(*grid)),
            RhsConfig::Inline { value } => match value {
                FieldSpec::Constant(c) => Ok(Field2D::constant(*grid, *c)),
                FieldSpec::Values(v) => {
                    Field2D::new(*grid, v.clone()).map_err(|e| ConfigError(format!("rhs: {e}")))
                }
                FieldSpec::Poly { poly } => Coefficient::Polynomial(poly.clone())
                    .sample(grid)
                    .map_err(cfg_err),
            },
            RhsConfig::Oracle => {
                let s = self.oracle().expect("validated");
                let spec = goursat_core::mms::manufacture(
                    &s,
                    coefficients.clone(),
                    *grid,
                    self.config.p,
                    self.config.solver.params(),
                )
                .map_err(cfg_err)?;
                Ok(spec.rhs)
            }
        }
    }
}
