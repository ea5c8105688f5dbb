//! Goursat boundary data in its two forms and the exact maps between them.
//!
//! *Classical* data prescribes `u`, `D1 u` on `x1 = 0` (`phi1`, `phi2`) and
//! `u`, `D2 u`, `D2^2 u`, `D2^3 u` on `x2 = 0` (`psi1..psi4`); the pieces must
//! agree at the origin. *Non-classical* data prescribes the eight corner
//! values `D1^i D2^j u(0, 0)` (`i <= 1`, `j <= 3`), the traces
//! `D1^2 D2^j u(x1, 0)` (`j <= 3`) and `D1^i D2^4 u(0, x2)` (`i <= 1`), which
//! are independent of one another.

use crate::error::{Error, Result};
use crate::field_grid::quadrature::taylor_integral;
use crate::field_grid::{Field1D, Grid1D, Grid2D};
use crate::scalar::{taylor_monomial, Scalar};

/// Mismatch tolerance for the two sources of a corner value in [`to_nonclassical`].
pub const CORNER_MISMATCH_TOL: f64 = 1e-10;

/// Corner scalars, `D1^2 D2^j u(x1, 0)` traces and `D1^i D2^4 u(0, x2)` traces.
#[derive(Debug, Clone, PartialEq)]
pub struct NonClassicalData<T> {
    /// `corner[i][j] = D1^i D2^j u(0, 0)`.
    pub corner: [[T; 4]; 2],
    /// `edge_x1[j] = D1^2 D2^j u(x1, 0)`.
    pub edge_x1: [Field1D<T>; 4],
    /// `edge_x2[i] = D1^i D2^4 u(0, x2)`.
    pub edge_x2: [Field1D<T>; 2],
}

impl<T: Scalar> NonClassicalData<T> {
    pub fn new(
        corner: [[T; 4]; 2],
        edge_x1: [Field1D<T>; 4],
        edge_x2: [Field1D<T>; 2],
    ) -> Result<Self> {
        if corner.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("corner values".into()));
        }
        let g1 = *edge_x1[0].grid();
        let g2 = *edge_x2[0].grid();
        if edge_x1.iter().any(|f| *f.grid() != g1) || edge_x2.iter().any(|f| *f.grid() != g2) {
            return Err(Error::GridMismatch(
                "edge traces on inconsistent grids".into(),
            ));
        }
        Ok(Self {
            corner,
            edge_x1,
            edge_x2,
        })
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self {
            corner: [[T::zero(); 4]; 2],
            edge_x1: std::array::from_fn(|_| Field1D::zeros(grid.g1)),
            edge_x2: std::array::from_fn(|_| Field1D::zeros(grid.g2)),
        }
    }

    pub fn grid(&self) -> Grid2D<T> {
        Grid2D::new(*self.edge_x1[0].grid(), *self.edge_x2[0].grid())
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            corner: self.corner.map(|row| row.map(|z| c * z)),
            edge_x1: std::array::from_fn(|j| self.edge_x1[j].scale(c)),
            edge_x2: std::array::from_fn(|i| self.edge_x2[i].scale(c)),
        }
    }

    /// `self + c * other`, for linearity checks and superposition.
    pub fn axpy(&self, c: T, other: &Self) -> Result<Self> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch(
                "boundary data on different grids".into(),
            ));
        }
        let mut corner = self.corner;
        for (row, orow) in corner.iter_mut().zip(&other.corner) {
            for (z, &oz) in row.iter_mut().zip(orow) {
                *z += c * oz;
            }
        }
        Ok(Self {
            corner,
            edge_x1: std::array::from_fn(|j| self.edge_x1[j].axpy(c, &other.edge_x1[j])),
            edge_x2: std::array::from_fn(|i| self.edge_x2[i].axpy(c, &other.edge_x2[i])),
        })
    }

    /// Largest absolute difference over all scalars and trace nodes.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let corner = self
            .corner
            .iter()
            .flatten()
            .zip(other.corner.iter().flatten())
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        let e1 = self
            .edge_x1
            .iter()
            .zip(&other.edge_x1)
            .fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(b)));
        let e2 = self
            .edge_x2
            .iter()
            .zip(&other.edge_x2)
            .fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(b)));
        corner.max(e1).max(e2)
    }
}

/// Samples of a function and its derivatives, `derivs[k]` = k-th derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1D<T> {
    derivs: Vec<Field1D<T>>,
}

impl<T: Scalar> Jet1D<T> {
    pub fn new(derivs: Vec<Field1D<T>>) -> Result<Self> {
        let Some(first) = derivs.first() else {
            return Err(Error::InvalidParameter(
                "jet needs at least the value field".into(),
            ));
        };
        if derivs.iter().any(|d| d.grid() != first.grid()) {
            return Err(Error::GridMismatch(
                "jet derivative orders on different grids".into(),
            ));
        }
        Ok(Self { derivs })
    }

    pub fn zeros(grid: Grid1D<T>, orders: usize) -> Self {
        Self {
            derivs: vec![Field1D::zeros(grid); orders + 1],
        }
    }

    pub fn max_order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn grid(&self) -> &Grid1D<T> {
        self.derivs[0].grid()
    }

    pub fn derivative(&self, k: usize) -> &Field1D<T> {
        &self.derivs[k]
    }

    pub fn value(&self) -> &Field1D<T> {
        &self.derivs[0]
    }

    pub fn derivatives(&self) -> &[Field1D<T>] {
        &self.derivs
    }

    /// Derivative `k` at the origin.
    pub fn at_origin(&self, k: usize) -> T {
        self.derivs[k].at(0)
    }

    pub(crate) fn derivative_mut(&mut self, k: usize) -> &mut Field1D<T> {
        &mut self.derivs[k]
    }
}

/// `phi[i]` is `D1^i u(0, x2)` with derivatives in `x2` up to order 4;
/// `psi[j]` is `D2^j u(x1, 0)` with derivatives in `x1` up to order 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalData<T> {
    pub phi: [Jet1D<T>; 2],
    pub psi: [Jet1D<T>; 4],
}

impl<T: Scalar> ClassicalData<T> {
    pub fn new(phi: [Jet1D<T>; 2], psi: [Jet1D<T>; 4]) -> Result<Self> {
        if phi.iter().any(|j| j.max_order() != 4) || psi.iter().any(|j| j.max_order() != 2) {
            return Err(Error::InvalidParameter(
                "phi needs orders 0..=4, psi orders 0..=2".into(),
            ));
        }
        if phi.iter().any(|j| j.grid() != phi[0].grid())
            || psi.iter().any(|j| j.grid() != psi[0].grid())
        {
            return Err(Error::GridMismatch(
                "classical data on inconsistent grids".into(),
            ));
        }
        Ok(Self { phi, psi })
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self {
            phi: std::array::from_fn(|_| Jet1D::zeros(grid.g2, 4)),
            psi: std::array::from_fn(|_| Jet1D::zeros(grid.g1, 2)),
        }
    }

    pub fn grid(&self) -> Grid2D<T> {
        Grid2D::new(*self.psi[0].grid(), *self.phi[0].grid())
    }

    /// Shift `phi[i]`'s order-`k` samples by `delta` (for building bad data in tests).
    pub fn perturb_phi(&mut self, i: usize, k: usize, delta: T) {
        let f = self.phi[i].derivative_mut(k);
        *f = f.map(|v| v + delta);
    }

    /// Largest difference between the value fields (order 0) of the six functions.
    pub fn max_value_diff(&self, other: &Self) -> T {
        let a = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(x, y)| x.value().max_abs_diff(y.value()));
        let b = self
            .psi
            .iter()
            .zip(&other.psi)
            .map(|(x, y)| x.value().max_abs_diff(y.value()));
        a.chain(b).fold(T::zero(), T::max)
    }
}

/// Two sources of one corner value that disagree (`phi` side is kept).
#[derive(Debug, Clone, PartialEq)]
pub struct CornerMismatch<T> {
    pub i: usize,
    pub j: usize,
    pub phi_side: T,
    pub psi_side: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Converted<T> {
    pub data: NonClassicalData<T>,
    pub warnings: Vec<CornerMismatch<T>>,
}

/// Classical -> non-classical: read the corner values at the origin and the
/// highest-order traces.
pub fn to_nonclassical<T: Scalar>(c: &ClassicalData<T>) -> Converted<T> {
    let tol = T::lit(CORNER_MISMATCH_TOL);
    let mut corner = [[T::zero(); 4]; 2];
    let mut warnings = Vec::new();
    for (i, row) in corner.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            // Z_ij = phi_{i+1}^{(j)}(0) = psi_{j+1}^{(i)}(0)
            let phi_side = c.phi[i].at_origin(j);
            let psi_side = c.psi[j].at_origin(i);
            if (phi_side - psi_side).abs() > tol {
                warnings.push(CornerMismatch {
                    i,
                    j,
                    phi_side,
                    psi_side,
                });
            }
            *z = phi_side;
        }
    }
    let data = NonClassicalData {
        corner,
        edge_x1: std::array::from_fn(|j| c.psi[j].derivative(2).clone()),
        edge_x2: std::array::from_fn(|i| c.phi[i].derivative(4).clone()),
    };
    Converted { data, warnings }
}

/// Non-classical -> classical through the Taylor formulas with integral
/// remainder, differentiated in closed form for every stored order.
pub fn to_classical<T: Scalar>(nc: &NonClassicalData<T>) -> ClassicalData<T> {
    let grid = nc.grid();
    let x1 = grid.g1.nodes();
    let x2 = grid.g2.nodes();

    let phi = std::array::from_fn(|i| {
        let mut derivs = Vec::with_capacity(5);
        for k in 0..4 {
            let remainder = taylor_integral(&nc.edge_x2[i], 3 - k);
            let values = x2
                .iter()
                .zip(remainder.values())
                .map(|(&x, &r)| {
                    let poly = (k..4).fold(T::zero(), |acc, j| {
                        acc + taylor_monomial(x, j - k) * nc.corner[i][j]
                    });
                    poly + r
                })
                .collect();
            derivs.push(Field1D::from_raw(grid.g2, values));
        }
        derivs.push(nc.edge_x2[i].clone());
        Jet1D { derivs }
    });

    let psi = std::array::from_fn(|j| {
        let mut derivs = Vec::with_capacity(3);
        for k in 0..2 {
            let remainder = taylor_integral(&nc.edge_x1[j], 1 - k);
            let values = x1
                .iter()
                .zip(remainder.values())
                .map(|(&x, &r)| {
                    let poly = (k..2).fold(T::zero(), |acc, i| {
                        acc + taylor_monomial(x, i - k) * nc.corner[i][j]
                    });
                    poly + r
                })
                .collect();
            derivs.push(Field1D::from_raw(grid.g1, values));
        }
        derivs.push(nc.edge_x1[j].clone());
        Jet1D { derivs }
    });

    ClassicalData { phi, psi }
}

/// Residuals of the eight corner agreement conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport<T> {
    /// Row-major: `phi1(0) - psi1(0)`, `phi2(0) - psi1'(0)`, `phi1'(0) - psi2(0)`,
    /// `phi2'(0) - psi2'(0)`, ..., `phi2'''(0) - psi4'(0)`.
    pub residuals: [T; 8],
    pub max_residual: T,
    pub tolerance: T,
    pub pass: bool,
}

impl<T: Scalar> AgreementReport<T> {
    /// Human-readable labels of the eight conditions, in residual order.
    pub const LABELS: [&'static str; 8] = [
        "phi1(0) - psi1(0)",
        "phi2(0) - psi1'(0)",
        "phi1'(0) - psi2(0)",
        "phi2'(0) - psi2'(0)",
        "phi1''(0) - psi3(0)",
        "phi2''(0) - psi3'(0)",
        "phi1'''(0) - psi4(0)",
        "phi2'''(0) - psi4'(0)",
    ];
}

pub fn check_agreement<T: Scalar>(c: &ClassicalData<T>, tol: T) -> AgreementReport<T> {
    let mut residuals = [T::zero(); 8];
    for j in 0..4 {
        for i in 0..2 {
            residuals[2 * j + i] = c.phi[i].at_origin(j) - c.psi[j].at_origin(i);
        }
    }
    let max_residual = residuals.iter().fold(T::zero(), |m, r| m.max(r.abs()));
    AgreementReport {
        residuals,
        max_residual,
        tolerance: tol,
        pass: max_residual <= tol,
    }
}
