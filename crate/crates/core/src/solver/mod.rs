//! Reduction of the Goursat problem to `v + K v = f` for the density
//! `v = D1^2 D2^4 u`, where
//!
//! ```text
//! f  = Z_24 - sum a_ij B_ij          (B_ij: data part of D1^i D2^j u)
//! Kv = sum a_ij I_ij v               (I_ij: causal Volterra part)
//! ```
//!
//! `K` is causal in both variables, so the discrete system is triangular in
//! the lexicographic node order. Two solvers are provided: Picard iteration
//! (`v <- f - K v`) and a single marching sweep.

mod coefficients;
mod marching;
mod picard;

pub use coefficients::{
    validate_coefficients, ClassTag, Coefficient, CoefficientDiagnostic, CoefficientReport,
    CoefficientSet,
};
pub use marching::solve_marching;
pub use picard::solve_picard;

use crate::boundary_data::NonClassicalData;
use crate::error::{Error, Result};
use crate::field_grid::{Field2D, Grid2D, Norm};
use crate::representation::{AxisKernels, BoundaryTerms, JetField, MixedOrder};
use crate::scalar::Scalar;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 100;
/// `|1 + d|` at or below this is treated as a singular marching node.
pub const SINGULAR_DIAGONAL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Picard,
    Marching,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Picard => "picard",
            Method::Marching => "marching",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams<T> {
    pub tolerance: T,
    pub max_iterations: usize,
    pub method: Method,
}

impl<T: Scalar> Default for SolverParams<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(DEFAULT_TOLERANCE),
            max_iterations: DEFAULT_MAX_ITERATIONS,
            method: Method::Picard,
        }
    }
}

/// A complete problem: grid, coefficients, non-classical data and `Z_24`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<T> {
    pub grid: Grid2D<T>,
    /// Exponent for diagnostics only; the discrete operator does not depend on it.
    pub p: f64,
    pub coefficients: CoefficientSet<T>,
    pub data: NonClassicalData<T>,
    pub rhs: Field2D<T>,
    pub params: SolverParams<T>,
}

impl<T: Scalar> ProblemSpec<T> {
    pub fn new(
        p: f64,
        coefficients: CoefficientSet<T>,
        data: NonClassicalData<T>,
        rhs: Field2D<T>,
        params: SolverParams<T>,
    ) -> Result<Self> {
        let spec = Self {
            grid: *rhs.grid(),
            p,
            coefficients,
            data,
            rhs,
            params,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        Norm::new(self.p)?;
        if self.data.grid() != self.grid || *self.rhs.grid() != self.grid {
            return Err(Error::GridMismatch(
                "data, rhs and problem grid differ".into(),
            ));
        }
        if self.params.tolerance.is_nan() || self.params.tolerance <= T::zero() {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        if self.params.max_iterations < 1 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.params.method = method;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T> {
    pub method: Method,
    pub iterations: usize,
    /// `||v + K v - f||_inf` per iteration (one entry for marching).
    pub residual_history: Vec<T>,
    /// Largest mismatch between the jet's traces and the prescribed data.
    pub boundary_residual: T,
    /// `||v + K v - f||_inf` of the returned density.
    pub pde_residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub v: Field2D<T>,
    pub jet: JetField<T>,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Scalar> Solution<T> {
    pub fn u(&self) -> &Field2D<T> {
        self.jet.get(MixedOrder::VALUE)
    }
}

/// The discretized operator `K` with sampled coefficients and quadrature
/// weights, built once per solve.
pub(crate) struct VolterraOperator<T> {
    pub(crate) grid: Grid2D<T>,
    pub(crate) kernels: AxisKernels<T>,
    pub(crate) terms: Vec<(MixedOrder, Field2D<T>)>,
}

impl<T: Scalar> VolterraOperator<T> {
    pub(crate) fn new(spec: &ProblemSpec<T>) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            grid: spec.grid,
            kernels: AxisKernels::new(&spec.grid),
            terms: spec.coefficients.sample_nonzero(&spec.grid)?,
        })
    }

    pub(crate) fn apply(&self, v: &Field2D<T>) -> Result<Field2D<T>> {
        if *v.grid() != self.grid {
            return Err(Error::GridMismatch("density on a different grid".into()));
        }
        let mut out = Field2D::zeros(self.grid);
        let mut inner = Default::default();
        for (order, a) in &self.terms {
            let part = self.kernels.volterra_part_cached(v, &mut inner, *order);
            for ((o, &c), &w) in out
                .values_mut()
                .iter_mut()
                .zip(a.values())
                .zip(part.values())
            {
                *o += c * w;
            }
        }
        Ok(out)
    }

    /// `||v + Kv - f||_inf` given a precomputed `Kv`.
    pub(crate) fn defect(v: &Field2D<T>, kv: &Field2D<T>, f: &Field2D<T>) -> T {
        v.values()
            .iter()
            .zip(kv.values())
            .zip(f.values())
            .fold(T::zero(), |m, ((&a, &b), &c)| m.max((a + b - c).abs()))
    }
}

/// `f = Z_24 - sum a_ij B_ij`.
pub fn assemble_forcing<T: Scalar>(spec: &ProblemSpec<T>) -> Result<Field2D<T>> {
    spec.validate()?;
    let terms = spec.coefficients.sample_nonzero(&spec.grid)?;
    let boundary = BoundaryTerms::new(&spec.data);
    let mut f = spec.rhs.clone();
    for (order, a) in &terms {
        let b = boundary.part(*order);
        for ((x, &c), &w) in f.values_mut().iter_mut().zip(a.values()).zip(b.values()) {
            *x -= c * w;
        }
    }
    Ok(f)
}

/// `K v = sum a_ij I_ij v`.
pub fn apply_volterra<T: Scalar>(spec: &ProblemSpec<T>, v: &Field2D<T>) -> Result<Field2D<T>> {
    VolterraOperator::new(spec)?.apply(v)
}

/// Largest mismatch between the jet's corner values and edge traces and the
/// prescribed non-classical data.
pub fn boundary_residual<T: Scalar>(jet: &JetField<T>, data: &NonClassicalData<T>) -> T {
    let mut worst = T::zero();
    for i in 0..2 {
        for j in 0..4 {
            let order = MixedOrder::new(i, j).expect("valid order");
            worst = worst.max((jet.get(order).at(0, 0) - data.corner[i][j]).abs());
        }
        let order = MixedOrder::new(i, 4).expect("valid order");
        worst = worst.max(jet.get(order).restrict_x1(0).max_abs_diff(&data.edge_x2[i]));
    }
    for j in 0..4 {
        let order = MixedOrder::new(2, j).expect("valid order");
        worst = worst.max(jet.get(order).restrict_x2(0).max_abs_diff(&data.edge_x1[j]));
    }
    worst
}

pub(crate) fn finish<T: Scalar>(
    spec: &ProblemSpec<T>,
    op: &VolterraOperator<T>,
    f: &Field2D<T>,
    v: Field2D<T>,
    method: Method,
    iterations: usize,
    residual_history: Vec<T>,
) -> Result<Solution<T>> {
    let kv = op.apply(&v)?;
    let pde_residual = VolterraOperator::defect(&v, &kv, f);
    let jet = crate::representation::reconstruct_jet(&spec.data, &v)?;
    let boundary_residual = boundary_residual(&jet, &spec.data);
    Ok(Solution {
        v,
        jet,
        diagnostics: Diagnostics {
            method,
            iterations,
            residual_history,
            boundary_residual,
            pde_residual,
        },
    })
}

/// Solve with the method named in `spec.params`.
pub fn solve<T: Scalar>(spec: &ProblemSpec<T>) -> Result<Solution<T>> {
    match spec.params.method {
        Method::Picard => solve_picard(spec),
        Method::Marching => solve_marching(spec),
    }
}
