use crate::error::{Error, Result};
use crate::field_grid::{lp_norm, mixed_norm, Axis, Field2D, Grid2D};
use crate::representation::MixedOrder;
use crate::scalar::Scalar;

/// Integrability class a coefficient is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    /// `L_p(G)`: `a_ij`, `i <= 1`, `j <= 3`.
    PlainLp,
    /// `L^{x1,x2}_{inf,p}`, sup over `x1` of `L_p` in `x2`: `a_2j`, `j <= 3`.
    SupX1LpX2,
    /// `L^{x1,x2}_{p,inf}`, `L_p` in `x1` of sup over `x2`: `a_i4`, `i <= 1`.
    LpX1SupX2,
}

impl ClassTag {
    pub fn for_order(order: MixedOrder) -> Self {
        match (order.i(), order.j()) {
            (2, _) => ClassTag::SupX1LpX2,
            (_, 4) => ClassTag::LpX1SupX2,
            _ => ClassTag::PlainLp,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ClassTag::PlainLp => "L_p(G)",
            ClassTag::SupX1LpX2 => "L_{inf,p}: sup_x1 L_p(x2)",
            ClassTag::LpX1SupX2 => "L_{p,inf}: L_p(x1) sup_x2",
        }
    }

    /// Discrete norm of `field` in this class.
    pub fn norm<T: Scalar>(self, field: &Field2D<T>, p: f64) -> Result<T> {
        match self {
            ClassTag::PlainLp => lp_norm(field, p),
            ClassTag::SupX1LpX2 => mixed_norm(field, Axis::X2, p, f64::INFINITY),
            ClassTag::LpX1SupX2 => mixed_norm(field, Axis::X2, f64::INFINITY, p),
        }
    }
}

/// One coefficient `a_ij(x)`, either closed-form or sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient<T> {
    Constant(T),
    /// `sum c[m][n] x1^m x2^n`.
    Polynomial(Vec<Vec<T>>),
    /// `left` below `jump` along `axis`, `right` from `jump` on (a node sitting
    /// on the jump takes the right-limit value).
    Step {
        axis: Axis,
        jump: T,
        left: T,
        right: T,
    },
    Sampled(Field2D<T>),
}

impl<T: Scalar> Coefficient<T> {
    pub fn zero() -> Self {
        Coefficient::Constant(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Constant(c) => c.is_zero(),
            Coefficient::Polynomial(c) => c.iter().flatten().all(|x| x.is_zero()),
            Coefficient::Step { left, right, .. } => left.is_zero() && right.is_zero(),
            Coefficient::Sampled(f) => f.values().iter().all(|x| x.is_zero()),
        }
    }

    /// Node values on `grid`. A sampled coefficient may live on any refinement
    /// of `grid`.
    pub fn sample(&self, grid: &Grid2D<T>) -> Result<Field2D<T>> {
        let field = match self {
            Coefficient::Constant(c) => Field2D::constant(*grid, *c),
            Coefficient::Polynomial(c) => Field2D::from_fn(*grid, |x1, x2| {
                c.iter().rev().fold(T::zero(), |acc, row| {
                    acc * x1 + row.iter().rev().fold(T::zero(), |r, &a| r * x2 + a)
                })
            }),
            Coefficient::Step {
                axis,
                jump,
                left,
                right,
            } => Field2D::from_fn(*grid, |x1, x2| {
                let x = if *axis == Axis::X1 { x1 } else { x2 };
                if x >= *jump {
                    *right
                } else {
                    *left
                }
            }),
            Coefficient::Sampled(f) if f.grid() == grid => f.clone(),
            Coefficient::Sampled(f) => f.restrict_to(grid).map_err(|_| {
                Error::GridMismatch(
                    "sampled coefficient grid is not a refinement of the solve grid".into(),
                )
            })?,
        };
        Ok(field)
    }
}

/// The fourteen lower-order coefficients; unset entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet<T> {
    entries: Vec<Coefficient<T>>,
}

impl<T: Scalar> Default for CoefficientSet<T> {
    fn default() -> Self {
        Self::zero()
    }
}

fn slot(order: MixedOrder) -> Result<usize> {
    if order == MixedOrder::DENSITY {
        return Err(Error::InvalidParameter(
            "the principal part D1^2 D2^4 carries no coefficient".into(),
        ));
    }
    Ok(order.index())
}

impl<T: Scalar> CoefficientSet<T> {
    pub fn zero() -> Self {
        Self {
            entries: vec![Coefficient::zero(); 14],
        }
    }

    pub fn set(&mut self, order: MixedOrder, coefficient: Coefficient<T>) -> Result<&mut Self> {
        self.entries[slot(order)?] = coefficient;
        Ok(self)
    }

    /// Builder form of [`set`](Self::set) for `(i, j)` pairs.
    pub fn with(mut self, i: usize, j: usize, coefficient: Coefficient<T>) -> Result<Self> {
        self.set(MixedOrder::new(i, j)?, coefficient)?;
        Ok(self)
    }

    /// `None` for the principal order `(2, 4)`.
    pub fn get(&self, order: MixedOrder) -> Option<&Coefficient<T>> {
        slot(order).ok().map(|k| &self.entries[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (MixedOrder, &Coefficient<T>)> {
        MixedOrder::lower().zip(self.entries.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Coefficient::is_zero)
    }

    /// Node samples of the non-zero coefficients, in [`MixedOrder::lower`] order.
    pub fn sample_nonzero(&self, grid: &Grid2D<T>) -> Result<Vec<(MixedOrder, Field2D<T>)>> {
        let mut out = Vec::new();
        for (order, c) in self.iter() {
            let field = c.sample(grid)?;
            if field.values().iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidCoefficient {
                    i: order.i(),
                    j: order.j(),
                    reason: "non-finite sample".into(),
                });
            }
            if field.values().iter().any(|x| !x.is_zero()) {
                out.push((order, field));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientDiagnostic<T> {
    pub order: MixedOrder,
    pub class: ClassTag,
    pub norm: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport<T> {
    pub p: f64,
    pub entries: Vec<CoefficientDiagnostic<T>>,
}

impl<T: Scalar> CoefficientReport<T> {
    pub fn get(&self, order: MixedOrder) -> Option<&CoefficientDiagnostic<T>> {
        self.entries.iter().find(|d| d.order == order)
    }
}

/// Norm of every coefficient in its class. Never rejects finite data, however
/// discontinuous.
pub fn validate_coefficients<T: Scalar>(
    set: &CoefficientSet<T>,
    grid: &Grid2D<T>,
    p: f64,
) -> Result<CoefficientReport<T>> {
    let mut entries = Vec::with_capacity(14);
    for (order, c) in set.iter() {
        let field = c.sample(grid).map_err(|e| match e {
            Error::GridMismatch(reason) => Error::InvalidCoefficient {
                i: order.i(),
                j: order.j(),
                reason,
            },
            other => other,
        })?;
        if field.values().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCoefficient {
                i: order.i(),
                j: order.j(),
                reason: "non-finite sample".into(),
            });
        }
        let class = ClassTag::for_order(order);
        entries.push(CoefficientDiagnostic {
            order,
            class,
            norm: class.norm(&field, p)?,
        });
    }
    Ok(CoefficientReport { p, entries })
}
