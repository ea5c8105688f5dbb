use std::fmt::Write as _;

use super::{field_errors, manufacture, ManufacturedSolution};
use crate::error::{Error, Result};
use crate::field_grid::{Field2D, Grid1D, Grid2D};
use crate::scalar::Scalar;
use crate::solver::{solve, solve_marching, CoefficientSet, Method, SolverParams};

/// Errors below this are roundoff; such levels get no order estimate.
pub const ORDER_FLOOR: f64 = 1e-12;

/// What each level's `u` is compared against.
#[derive(Debug, Clone, PartialEq)]
pub enum StudyReference<T> {
    /// The manufactured solution itself.
    Exact,
    /// A marching solve on a finer grid with this many nodes per axis.
    SelfConvergence { nodes: usize },
    /// A previously computed fine-grid `u` (e.g. loaded from a cache file).
    Given(Field2D<T>),
}

/// `u` from a marching solve of the manufactured problem on an
/// `nodes x nodes` grid, used as a self-convergence reference.
pub fn reference_solution<T: Scalar>(
    s: &ManufacturedSolution<T>,
    coefficients: &CoefficientSet<T>,
    lengths: (T, T),
    nodes: usize,
    p: f64,
    params: SolverParams<T>,
) -> Result<Field2D<T>> {
    let grid = Grid2D::new(
        Grid1D::new(lengths.0, nodes)?,
        Grid1D::new(lengths.1, nodes)?,
    );
    let spec = manufacture(
        s,
        coefficients.clone(),
        grid,
        p,
        SolverParams {
            method: Method::Marching,
            ..params
        },
    )?;
    Ok(solve_marching(&spec)?.u().clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub h: f64,
    pub sup_error: f64,
    pub lp_error: f64,
    /// `log2(e_{2h} / e_h)` against the previous level.
    pub order: Option<f64>,
    pub iterations: usize,
    pub pde_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    /// Appends `row`, filling in its order against the previous row when
    /// both errors are above [`ORDER_FLOOR`].
    pub fn push(&mut self, mut row: ConvergenceRow) {
        if let Some(prev) = self.rows.last() {
            if prev.sup_error >= ORDER_FLOOR && row.sup_error >= ORDER_FLOOR {
                row.order = Some((prev.sup_error / row.sup_error).log2());
            }
        }
        self.rows.push(row);
    }

    /// CSV with columns `nodes,h,sup_error,lp_error,order`; the order column is
    /// left out for single-level tables and blank where not applicable.
    pub fn to_csv(&self) -> String {
        let with_order = self.rows.len() > 1;
        let mut out = String::from(if with_order {
            "nodes,h,sup_error,lp_error,order\n"
        } else {
            "nodes,h,sup_error,lp_error\n"
        });
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{:.16e},{:.16e},{:.16e}",
                r.nodes, r.h, r.sup_error, r.lp_error
            );
            if with_order {
                match r.order {
                    Some(q) => {
                        let _ = write!(out, ",{q:.16e}");
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("convergence study stopped at level {level}: {error}")]
pub struct StudyFailure {
    pub level: usize,
    pub partial: ConvergenceTable,
    pub error: Error,
}

fn check_levels(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::Study("at least one grid size".into()));
    }
    for w in sizes.windows(2) {
        if w[0] < 2 || w[1] - 1 != 2 * (w[0] - 1) {
            return Err(Error::Study(format!(
                "each level to halve the spacing, got {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Manufactured solve on each grid of `sizes` (nodes per axis over
/// `[0, lengths.0] x [0, lengths.1]`) and the sup/`L_p` error of `u`.
pub fn convergence_study<T: Scalar>(
    s: &ManufacturedSolution<T>,
    coefficients: &CoefficientSet<T>,
    lengths: (T, T),
    sizes: &[usize],
    p: f64,
    params: SolverParams<T>,
    reference: StudyReference<T>,
) -> std::result::Result<ConvergenceTable, StudyFailure> {
    let mut table = ConvergenceTable::default();
    let fail = |level: usize, table: &ConvergenceTable, error: Error| StudyFailure {
        level,
        partial: table.clone(),
        error,
    };
    check_levels(sizes).map_err(|e| fail(0, &table, e))?;

    let grid_for = |n: usize| -> Result<Grid2D<T>> {
        Ok(Grid2D::new(
            Grid1D::new(lengths.0, n)?,
            Grid1D::new(lengths.1, n)?,
        ))
    };

    let last = *sizes.last().expect("non-empty");
    let reference_u = match reference {
        StudyReference::Exact => None,
        StudyReference::SelfConvergence { nodes } => {
            if nodes <= last || (nodes - 1) % (last - 1) != 0 {
                return Err(fail(
                    0,
                    &table,
                    Error::Study(format!("reference grid {nodes} to refine level {last}")),
                ));
            }
            Some(
                reference_solution(s, coefficients, lengths, nodes, p, params)
                    .map_err(|e| fail(0, &table, e))?,
            )
        }
        StudyReference::Given(u) => Some(u),
    };

    for (level, &n) in sizes.iter().enumerate() {
        let run = || -> Result<ConvergenceRow> {
            let grid = grid_for(n)?;
            let spec = manufacture(s, coefficients.clone(), grid, p, params)?;
            let sol = solve(&spec)?;
            let target = match &reference_u {
                None => s.derivative_field(0, 0, &grid),
                Some(u_ref) => u_ref.restrict_to(&grid)?,
            };
            let (sup, lp) = field_errors(sol.u(), &target, p)?;
            Ok(ConvergenceRow {
                nodes: n,
                h: grid.g1.spacing().as_f64(),
                sup_error: sup.as_f64(),
                lp_error: lp.as_f64(),
                order: None,
                iterations: sol.diagnostics.iterations,
                pde_residual: sol.diagnostics.pde_residual.as_f64(),
            })
        };
        match run() {
            Ok(row) => table.push(row),
            Err(e) => return Err(fail(level, &table, e)),
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mms::{PolySolution, TrigSolution};
    use crate::solver::Coefficient;

    #[test]
    fn level_checks() {
        assert!(check_levels(&[]).is_err());
        assert!(check_levels(&[17, 33, 65]).is_ok());
        assert!(check_levels(&[17, 32]).is_err());
        assert!(check_levels(&[9]).is_ok());
    }

    #[test]
    fn exact_regime_has_no_orders() {
        let s = ManufacturedSolution::Poly(PolySolution::new(vec![
            vec![1.0, 1.0, 0.5, 0.25],
            vec![2.0, 0.0, 1.0],
            vec![0.5],
        ]));
        let t = convergence_study(
            &s,
            &CoefficientSet::zero(),
            (1.0, 1.0),
            &[5, 9, 17],
            2.0,
            SolverParams::default(),
            StudyReference::Exact,
        )
        .unwrap();
        assert!(t
            .rows
            .iter()
            .all(|r| r.sup_error < ORDER_FLOOR && r.order.is_none()));
        let csv = t.to_csv();
        assert!(csv.starts_with("nodes,h,sup_error,lp_error,order\n"));
        assert!(csv.lines().nth(2).unwrap().ends_with(','));
    }

    #[test]
    fn trig_orders_near_two() {
        let coeffs = CoefficientSet::zero()
            .with(0, 0, Coefficient::Constant(1.0))
            .unwrap()
            .with(1, 2, Coefficient::Constant(1.0))
            .unwrap();
        let s = ManufacturedSolution::Trig(TrigSolution::unit());
        let t = convergence_study(
            &s,
            &coeffs,
            (1.0, 1.0),
            &[17, 33, 65],
            2.0,
            SolverParams::default(),
            StudyReference::Exact,
        )
        .unwrap();
        let orders = t.orders();
        assert_eq!(orders.len(), 2);
        assert!(
            orders.iter().all(|&q| (1.8..=2.2).contains(&q)),
            "{orders:?}"
        );
    }

    #[test]
    fn single_level_csv_has_no_order_column() {
        let s = ManufacturedSolution::Trig(TrigSolution::unit());
        let t = convergence_study(
            &s,
            &CoefficientSet::zero(),
            (1.0, 1.0),
            &[9],
            2.0,
            SolverParams::default(),
            StudyReference::Exact,
        )
        .unwrap();
        assert_eq!(
            t.to_csv().lines().next().unwrap(),
            "nodes,h,sup_error,lp_error"
        );
    }

    #[test]
    fn failure_keeps_partial_table() {
        let coeffs = CoefficientSet::zero()
            .with(0, 0, Coefficient::Constant(1.0))
            .unwrap();
        let s = ManufacturedSolution::Trig(TrigSolution::unit());
        let params = SolverParams {
            max_iterations: 1,
            ..SolverParams::default()
        };
        let err = convergence_study(
            &s,
            &coeffs,
            (1.0, 1.0),
            &[5, 9],
            2.0,
            params,
            StudyReference::Exact,
        )
        .unwrap_err();
        assert_eq!(err.level, 0);
        assert!(err.partial.rows.is_empty());
        assert!(matches!(err.error, Error::NotConverged { .. }));
    }
}
