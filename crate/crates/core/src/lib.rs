//! Goursat problem for the sixth-order pseudoparabolic equation
//!
//! ```text
//! D1^2 D2^4 u + sum_{(i,j) != (2,4)} a_ij(x) D1^i D2^j u = Z_24(x)   on (0,h1) x (0,h2)
//! ```
//!
//! with either classical or non-classical boundary data, solved by reduction
//! to a second-kind Volterra equation for `v = D1^2 D2^4 u`.
//!
//! All numerical types are generic over [`Scalar`]; the `f64` aliases below
//! are what the command-line driver and the file formats use.

pub mod boundary_data;
pub mod error;
pub mod field_grid;
pub mod mms;
pub mod representation;
pub mod scalar;
pub mod schema;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Grid1D = field_grid::Grid1D<f64>;
pub type Grid2D = field_grid::Grid2D<f64>;
pub type Field1D = field_grid::Field1D<f64>;
pub type Field2D = field_grid::Field2D<f64>;
pub type JetField = representation::JetField<f64>;
pub type NonClassicalData = boundary_data::NonClassicalData<f64>;
pub type ClassicalData = boundary_data::ClassicalData<f64>;
pub type CoefficientSet = solver::CoefficientSet<f64>;
pub type ProblemSpec = solver::ProblemSpec<f64>;
pub type Solution = solver::Solution<f64>;
pub type ManufacturedSolution = mms::ManufacturedSolution<f64>;

pub use representation::MixedOrder;
