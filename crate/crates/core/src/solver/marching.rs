use super::{
    assemble_forcing, finish, Method, ProblemSpec, Solution, VolterraOperator, SINGULAR_DIAGONAL,
};
use crate::error::{Error, Result};
use crate::field_grid::Field2D;
use crate::scalar::Scalar;

/// How a lower-order term reaches back into `v`.
#[derive(Debug, Clone, Copy)]
enum Reach {
    /// `i <= 1, j <= 3`: x2 power `b` inside, x1 power `a` outside.
    Both { a: usize, b: usize },
    /// `i = 2`: x2 integral only.
    X2 { b: usize },
    /// `j = 4`: x1 integral only.
    X1 { a: usize },
}

/// Direct solve of the triangular discrete system, row by row in `x1` and
/// node by node in `x2`. At each node the unknown enters through the
/// diagonal trapezoid weights only, so `(1 + d) v = f - known`.
pub fn solve_marching<T: Scalar>(spec: &ProblemSpec<T>) -> Result<Solution<T>> {
    let op = VolterraOperator::new(spec)?;
    let f = assemble_forcing(spec)?;
    let (n1, n2) = spec.grid.shape();
    let k1s = &op.kernels.x1;
    let k2s = &op.kernels.x2;

    let reaches: Vec<Reach> = op
        .terms
        .iter()
        .map(|(o, _)| match (o.i(), o.j()) {
            (2, j) => Reach::X2 { b: 3 - j },
            (i, 4) => Reach::X1 { a: 1 - i },
            (i, j) => Reach::Both { a: 1 - i, b: 3 - j },
        })
        .collect();
    let mut need_b = [false; 4];
    for r in &reaches {
        if let Reach::Both { b, .. } | Reach::X2 { b } = *r {
            need_b[b] = true;
        }
    }

    let mut v = Field2D::zeros(spec.grid);
    // inner[b] = int_0^{x2} (x2 - t)^b / b! v(x1, t) dt, filled as rows are solved
    let mut inner: [Vec<T>; 4] = std::array::from_fn(|b| {
        if need_b[b] {
            vec![T::zero(); n1 * n2]
        } else {
            Vec::new()
        }
    });
    // contributions of rows m < k to the x1 integrals
    let mut partial_both = vec![T::zero(); reaches.len() * n2];
    let mut inner_known = [T::zero(); 4];

    for k in 0..n1 {
        partial_both.iter_mut().for_each(|x| *x = T::zero());
        for (t, r) in reaches.iter().enumerate() {
            let (a, src): (usize, &[T]) = match *r {
                Reach::Both { a, b } => (a, &inner[b]),
                Reach::X1 { a } => (a, v.values()),
                Reach::X2 { .. } => continue,
            };
            let row = k1s[a].row(k);
            let dst = &mut partial_both[t * n2..(t + 1) * n2];
            for (m, &w) in row.iter().enumerate().take(k) {
                for (d, &s) in dst.iter_mut().zip(&src[m * n2..(m + 1) * n2]) {
                    *d += w * s;
                }
            }
        }

        for l in 0..n2 {
            let idx = k * n2 + l;
            for b in 0..4 {
                if need_b[b] {
                    let row = k2s[b].row(l);
                    let vrow = &v.values()[k * n2..idx];
                    inner_known[b] = row
                        .iter()
                        .zip(vrow)
                        .fold(T::zero(), |acc, (&w, &x)| acc + w * x);
                }
            }

            let mut known = T::zero();
            let mut diag = T::zero();
            for ((r, (_, coef)), t) in reaches.iter().zip(&op.terms).zip(0..) {
                let c = coef.values()[idx];
                match *r {
                    Reach::Both { a, b } => {
                        let d1 = k1s[a].diag(k);
                        known += c * (partial_both[t * n2 + l] + d1 * inner_known[b]);
                        diag += c * d1 * k2s[b].diag(l);
                    }
                    Reach::X2 { b } => {
                        known += c * inner_known[b];
                        diag += c * k2s[b].diag(l);
                    }
                    Reach::X1 { a } => {
                        known += c * partial_both[t * n2 + l];
                        diag += c * k1s[a].diag(k);
                    }
                }
            }
            let pivot = T::one() + diag;
            if pivot.abs() <= T::lit(SINGULAR_DIAGONAL) || !pivot.is_finite() {
                return Err(Error::SingularNode {
                    k1: k,
                    k2: l,
                    magnitude: pivot.abs().as_f64(),
                });
            }
            let value = (f.values()[idx] - known) / pivot;
            v.values_mut()[idx] = value;
            for b in 0..4 {
                if need_b[b] {
                    inner[b][idx] = inner_known[b] + k2s[b].diag(l) * value;
                }
            }
        }
    }

    let solution = finish(spec, &op, &f, v, Method::Marching, 1, Vec::new())?;
    let residual = solution.diagnostics.pde_residual;
    if residual > spec.params.tolerance || !residual.is_finite() {
        return Err(Error::ResidualAboveTolerance {
            method: "marching",
            residual: residual.as_f64(),
            tolerance: spec.params.tolerance.as_f64(),
        });
    }
    let mut solution = solution;
    solution.diagnostics.residual_history.push(residual);
    Ok(solution)
}
