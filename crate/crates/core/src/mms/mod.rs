//! Manufactured solutions: exact jets, fabricated problems, error reports and
//! grid-refinement studies.

mod oracle;
mod study;

pub use oracle::{oracle_derivative, ManufacturedSolution, PolySolution, TrigSolution};
pub use study::{
    convergence_study, reference_solution, ConvergenceRow, ConvergenceTable, StudyFailure,
    StudyReference, ORDER_FLOOR,
};

use crate::error::{Error, Result};
use crate::field_grid::{lp_norm, sobolev_norm_2_4, Field2D, Grid2D};
use crate::representation::{JetField, MixedOrder};
use crate::scalar::Scalar;
use crate::solver::{CoefficientSet, ProblemSpec, Solution, SolverParams};

/// Problem whose continuum solution is `s`: `Z_24 = D1^2 D2^4 u* + sum a_ij D1^i D2^j u*`
/// and the non-classical traces of `u*`.
pub fn manufacture<T: Scalar>(
    s: &ManufacturedSolution<T>,
    coefficients: CoefficientSet<T>,
    grid: Grid2D<T>,
    p: f64,
    params: SolverParams<T>,
) -> Result<ProblemSpec<T>> {
    let mut rhs = oracle_derivative(s, MixedOrder::DENSITY, &grid);
    for (order, a) in coefficients.sample_nonzero(&grid)? {
        let d = oracle_derivative(s, order, &grid);
        for ((r, &c), &x) in rhs.values_mut().iter_mut().zip(a.values()).zip(d.values()) {
            *r += c * x;
        }
    }
    ProblemSpec::new(p, coefficients, s.nonclassical_data(&grid), rhs, params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderError<T> {
    pub order: MixedOrder,
    pub lp_error: T,
    pub sup_error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub p: f64,
    pub per_order: Vec<OrderError<T>>,
    /// Discrete `W_p^{(2,4)}` norm of the error jet.
    pub sobolev_error: T,
    pub pde_residual: T,
    pub boundary_residual: T,
}

impl<T: Scalar> ErrorReport<T> {
    pub fn get(&self, order: MixedOrder) -> &OrderError<T> {
        &self.per_order[order.index()]
    }

    pub fn max_sup_error(&self) -> T {
        self.per_order
            .iter()
            .fold(T::zero(), |m, e| m.max(e.sup_error))
    }
}

/// Jet-wise errors of `sol` against the exact solution.
pub fn error_report<T: Scalar>(
    sol: &Solution<T>,
    s: &ManufacturedSolution<T>,
    p: f64,
) -> Result<ErrorReport<T>> {
    let grid = *sol.jet.grid();
    let exact = s.exact_jet(&grid);
    let mut per_order = Vec::with_capacity(15);
    let mut entries = std::collections::BTreeMap::new();
    for (order, field) in sol.jet.iter() {
        let err = field.zip_map(exact.get(order), |a, b| a - b)?;
        per_order.push(OrderError {
            order,
            lp_error: lp_norm(&err, p)?,
            sup_error: err.max_abs(),
        });
        entries.insert(order, err);
    }
    let error_jet = JetField::from_entries(grid, entries)?;
    Ok(ErrorReport {
        p,
        per_order,
        sobolev_error: sobolev_norm_2_4(&error_jet, p)?,
        pde_residual: sol.diagnostics.pde_residual,
        boundary_residual: sol.diagnostics.boundary_residual,
    })
}

/// `lp` and sup norms of `a - b`.
pub(crate) fn field_errors<T: Scalar>(a: &Field2D<T>, b: &Field2D<T>, p: f64) -> Result<(T, T)> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch(
            "error fields on different grids".into(),
        ));
    }
    let diff = a.zip_map(b, |x, y| x - y)?;
    Ok((diff.max_abs(), lp_norm(&diff, p)?))
}
