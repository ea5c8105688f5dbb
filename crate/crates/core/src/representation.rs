//! Integral representation of `u` through its non-classical data and the
//! density `v = D1^2 D2^4 u`:
//!
//! ```text
//! u = sum_{i<=1, j<=3} x1^i/i! x2^j/j! Z_ij
//!   + sum_{j<=3} x2^j/j! int_0^x1 (x1-s) Z_2j(s) ds
//!   + sum_{i<=1} x1^i/i! int_0^x2 (x2-t)^3/3! Z_i4(t) dt
//!   + int_0^x1 int_0^x2 (x1-s) (x2-t)^3/3! v(s, t) dt ds
//! ```
//!
//! and the same formula differentiated for each `D1^i D2^j u`.

use std::collections::BTreeMap;

use crate::boundary_data::NonClassicalData;
use crate::error::{Error, Result};
use crate::field_grid::quadrature::{taylor_integral, TaylorKernel};
use crate::field_grid::{Field1D, Field2D, Grid2D};
use crate::scalar::{taylor_monomial, Scalar};

/// Multi-index of `D1^i D2^j`, `i <= 2`, `j <= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedOrder {
    i: usize,
    j: usize,
}

impl MixedOrder {
    pub const DENSITY: MixedOrder = MixedOrder { i: 2, j: 4 };
    pub const VALUE: MixedOrder = MixedOrder { i: 0, j: 0 };

    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i > 2 || j > 4 {
            return Err(Error::InvalidParameter(format!(
                "mixed order ({i}, {j}) outside 0..=2 x 0..=4"
            )));
        }
        Ok(Self { i, j })
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    /// All 15 orders, `i` major.
    pub fn all() -> impl Iterator<Item = MixedOrder> {
        (0..=2).flat_map(|i| (0..=4).map(move |j| MixedOrder { i, j }))
    }

    /// The 14 lower-order terms of the operator.
    pub fn lower() -> impl Iterator<Item = MixedOrder> {
        Self::all().filter(|o| *o != Self::DENSITY)
    }

    pub fn index(self) -> usize {
        self.i * 5 + self.j
    }
}

impl std::fmt::Display for MixedOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D1^{}D2^{}", self.i, self.j)
    }
}

/// All fifteen `D1^i D2^j u` on one grid; entry `(2, 4)` is the density.
#[derive(Debug, Clone, PartialEq)]
pub struct JetField<T> {
    grid: Grid2D<T>,
    entries: Vec<Field2D<T>>,
}

impl<T: Scalar> JetField<T> {
    /// Fails with [`Error::IncompleteJet`] when any order is missing.
    pub fn from_entries(
        grid: Grid2D<T>,
        mut entries: BTreeMap<MixedOrder, Field2D<T>>,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(15);
        for order in MixedOrder::all() {
            let field = entries.remove(&order).ok_or(Error::IncompleteJet {
                i: order.i,
                j: order.j,
            })?;
            if *field.grid() != grid {
                return Err(Error::GridMismatch(format!("jet entry {order}")));
            }
            out.push(field);
        }
        Ok(Self { grid, entries: out })
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self {
            grid,
            entries: vec![Field2D::zeros(grid); 15],
        }
    }

    pub fn grid(&self) -> &Grid2D<T> {
        &self.grid
    }

    pub fn get(&self, order: MixedOrder) -> &Field2D<T> {
        &self.entries[order.index()]
    }

    pub fn density(&self) -> &Field2D<T> {
        self.get(MixedOrder::DENSITY)
    }

    pub fn iter(&self) -> impl Iterator<Item = (MixedOrder, &Field2D<T>)> {
        MixedOrder::all().zip(self.entries.iter())
    }
}

/// Causal integration of a 2-D field along one axis with the kernel
/// `(x - s)^power / power!`, reusing precomputed triangular weights.
pub(crate) struct AxisKernels<T> {
    /// Indexed by power 0..=1 along x1.
    pub(crate) x1: [TaylorKernel<T>; 2],
    /// Indexed by power 0..=3 along x2.
    pub(crate) x2: [TaylorKernel<T>; 4],
}

impl<T: Scalar> AxisKernels<T> {
    pub(crate) fn new(grid: &Grid2D<T>) -> Self {
        Self {
            x1: std::array::from_fn(|a| TaylorKernel::new(&grid.g1, a)),
            x2: std::array::from_fn(|b| TaylorKernel::new(&grid.g2, b)),
        }
    }

    /// `int_0^{x2} (x2 - t)^power/power! f(x1, t) dt` at every node.
    pub(crate) fn along_x2(&self, f: &Field2D<T>, power: usize) -> Field2D<T> {
        let kernel = &self.x2[power];
        let n1 = f.grid().g1.node_count();
        let mut values = Vec::with_capacity(f.values().len());
        for k1 in 0..n1 {
            values.extend(kernel.apply(f.row(k1)));
        }
        Field2D::from_raw(*f.grid(), values)
    }

    /// `int_0^{x1} (x1 - s)^power/power! f(s, x2) ds` at every node.
    pub(crate) fn along_x1(&self, f: &Field2D<T>, power: usize) -> Field2D<T> {
        let kernel = &self.x1[power];
        let (n1, n2) = f.grid().shape();
        let mut out = Field2D::zeros(*f.grid());
        let vals = out.values_mut();
        for k in 0..n1 {
            let row = kernel.row(k);
            let dst = &mut vals[k * n2..(k + 1) * n2];
            for (m, &w) in row.iter().enumerate() {
                for (d, &s) in dst.iter_mut().zip(f.row(m)) {
                    *d += w * s;
                }
            }
        }
        out
    }

    /// Density-dependent part of `D1^i D2^j u`; `inner` caches `along_x2(v, b)`.
    pub(crate) fn volterra_part_cached(
        &self,
        v: &Field2D<T>,
        inner: &mut [Option<Field2D<T>>; 4],
        order: MixedOrder,
    ) -> Field2D<T> {
        let (i, j) = (order.i, order.j);
        if j == 4 {
            return if i == 2 {
                v.clone()
            } else {
                self.along_x1(v, 1 - i)
            };
        }
        let b = 3 - j;
        let inner_b = inner[b].get_or_insert_with(|| self.along_x2(v, b));
        if i == 2 {
            inner_b.clone()
        } else {
            self.along_x1(inner_b, 1 - i)
        }
    }
}

/// Data-dependent part `B_ij` of `D1^i D2^j u`.
pub fn boundary_part<T: Scalar>(nc: &NonClassicalData<T>, order: MixedOrder) -> Field2D<T> {
    BoundaryTerms::new(nc).part(order)
}

/// The one-dimensional remainder integrals every `B_ij` is built from.
pub(crate) struct BoundaryTerms<'a, T> {
    nc: &'a NonClassicalData<T>,
    grid: Grid2D<T>,
    x1: Vec<T>,
    x2: Vec<T>,
    /// `p[a][j] = int_0^{x1} (x1-s)^a/a! Z_2j(s) ds`.
    p: [[Field1D<T>; 4]; 2],
    /// `q[b][i] = int_0^{x2} (x2-t)^b/b! Z_i4(t) dt`.
    q: [[Field1D<T>; 2]; 4],
}

impl<'a, T: Scalar> BoundaryTerms<'a, T> {
    pub(crate) fn new(nc: &'a NonClassicalData<T>) -> Self {
        let grid = nc.grid();
        Self {
            nc,
            grid,
            x1: grid.g1.nodes(),
            x2: grid.g2.nodes(),
            p: std::array::from_fn(|a| std::array::from_fn(|j| taylor_integral(&nc.edge_x1[j], a))),
            q: std::array::from_fn(|b| std::array::from_fn(|i| taylor_integral(&nc.edge_x2[i], b))),
        }
    }

    pub(crate) fn part(&self, order: MixedOrder) -> Field2D<T> {
        let (i, j) = (order.i, order.j);
        let nc = self.nc;
        let (n1, n2) = self.grid.shape();
        let mut values = Vec::with_capacity(n1 * n2);
        for k1 in 0..n1 {
            let x1 = self.x1[k1];
            for k2 in 0..n2 {
                let x2 = self.x2[k2];
                let value = match (i, j) {
                    (2, 4) => T::zero(),
                    (2, _) => (j..4).fold(T::zero(), |acc, jj| {
                        acc + taylor_monomial(x2, jj - j) * nc.edge_x1[jj].at(k1)
                    }),
                    (_, 4) => (i..2).fold(T::zero(), |acc, ii| {
                        acc + taylor_monomial(x1, ii - i) * nc.edge_x2[ii].at(k2)
                    }),
                    _ => {
                        let mut acc = T::zero();
                        for ii in i..2 {
                            for jj in j..4 {
                                acc += taylor_monomial(x1, ii - i)
                                    * taylor_monomial(x2, jj - j)
                                    * nc.corner[ii][jj];
                            }
                        }
                        for jj in j..4 {
                            acc += taylor_monomial(x2, jj - j) * self.p[1 - i][jj].at(k1);
                        }
                        for ii in i..2 {
                            acc += taylor_monomial(x1, ii - i) * self.q[3 - j][ii].at(k2);
                        }
                        acc
                    }
                };
                values.push(value);
            }
        }
        Field2D::from_raw(self.grid, values)
    }
}

/// Density-dependent part `I_ij v` of `D1^i D2^j u`.
pub fn volterra_part<T: Scalar>(v: &Field2D<T>, order: MixedOrder) -> Field2D<T> {
    let kernels = AxisKernels::new(v.grid());
    kernels.volterra_part_cached(v, &mut Default::default(), order)
}

fn ensure_grid<T: Scalar>(nc: &NonClassicalData<T>, v: &Field2D<T>) -> Result<()> {
    if nc.grid() == *v.grid() {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            "density and boundary data on different grids".into(),
        ))
    }
}

/// `u` itself from the data and the density.
pub fn base_representation<T: Scalar>(
    nc: &NonClassicalData<T>,
    v: &Field2D<T>,
) -> Result<Field2D<T>> {
    ensure_grid(nc, v)?;
    boundary_part(nc, MixedOrder::VALUE).axpy(T::one(), &volterra_part(v, MixedOrder::VALUE))
}

/// All fifteen mixed derivatives; entry `(2, 4)` is `v` itself.
pub fn reconstruct_jet<T: Scalar>(nc: &NonClassicalData<T>, v: &Field2D<T>) -> Result<JetField<T>> {
    ensure_grid(nc, v)?;
    let grid = nc.grid();
    let kernels = AxisKernels::new(&grid);
    let terms = BoundaryTerms::new(nc);
    let mut inner = Default::default();
    let entries = MixedOrder::all()
        .map(|order| {
            if order == MixedOrder::DENSITY {
                return v.clone();
            }
            let mut field = terms.part(order);
            let vol = kernels.volterra_part_cached(v, &mut inner, order);
            for (b, &w) in field.values_mut().iter_mut().zip(vol.values()) {
                *b += w;
            }
            field
        })
        .collect();
    Ok(JetField { grid, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_data::to_classical;
    use crate::field_grid::Grid1D;

    fn unit(n: usize) -> Grid2D<f64> {
        Grid2D::square(1.0, n).unwrap()
    }

    #[test]
    fn order_ranges() {
        assert!(MixedOrder::new(3, 0).is_err());
        assert!(MixedOrder::new(0, 5).is_err());
        assert_eq!(MixedOrder::all().count(), 15);
        assert_eq!(MixedOrder::lower().count(), 14);
        assert!(MixedOrder::all().enumerate().all(|(k, o)| o.index() == k));
    }

    #[test]
    fn incomplete_jet_rejected() {
        let g = unit(5);
        let mut entries: BTreeMap<_, _> =
            MixedOrder::all().map(|o| (o, Field2D::zeros(g))).collect();
        entries.remove(&MixedOrder::new(1, 3).unwrap());
        assert_eq!(
            JetField::from_entries(g, entries).unwrap_err(),
            Error::IncompleteJet { i: 1, j: 3 }
        );
    }

    #[test]
    fn zero_inputs() {
        let g = unit(9);
        let nc = NonClassicalData::zeros(g);
        let v = Field2D::zeros(g);
        assert_eq!(base_representation(&nc, &v).unwrap(), Field2D::zeros(g));
        assert_eq!(reconstruct_jet(&nc, &v).unwrap(), JetField::zeros(g));
        for o in MixedOrder::all() {
            assert_eq!(volterra_part(&v, o), Field2D::zeros(g));
        }
    }

    #[test]
    fn constant_corner() {
        let g = unit(9);
        let mut nc = NonClassicalData::zeros(g);
        nc.corner[0][0] = 2.5;
        let u = base_representation(&nc, &Field2D::zeros(g)).unwrap();
        assert!(u.values().iter().all(|&x| x == 2.5));
    }

    #[test]
    fn unit_density() {
        let g = unit(65);
        let u =
            base_representation(&NonClassicalData::zeros(g), &Field2D::constant(g, 1.0)).unwrap();
        let exact = Field2D::from_fn(g, |a, b| a * a * b.powi(4) / 48.0);
        assert!(u.max_abs_diff(&exact) <= 2e-3);
        assert!(u.restrict_x2(0).values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn density_identity_and_exact_case() {
        let g = Grid2D::new(Grid1D::new(0.8, 11).unwrap(), Grid1D::new(1.7, 23).unwrap());
        let v = Field2D::from_fn(g, |a, b| a - b * b);
        assert_eq!(volterra_part(&v, MixedOrder::DENSITY), v);
        let one = Field2D::constant(g, 1.0);
        let out = volterra_part(&one, MixedOrder::new(1, 3).unwrap());
        assert!(out.max_abs_diff(&Field2D::from_fn(g, |a, b| a * b)) <= 1e-12);
    }

    fn sample_nc(g: Grid2D<f64>) -> NonClassicalData<f64> {
        let mut nc = NonClassicalData::zeros(g);
        for i in 0..2 {
            for j in 0..4 {
                nc.corner[i][j] = 0.3 * i as f64 - 0.2 * j as f64 + 0.1;
            }
        }
        for j in 0..4 {
            nc.edge_x1[j] = Field1D::from_fn(g.g1, |x| (j as f64 + 1.0) * x.sin() - 0.5);
        }
        for i in 0..2 {
            nc.edge_x2[i] = Field1D::from_fn(g.g2, |x| (x * (i as f64 + 2.0)).cos());
        }
        nc
    }

    #[test]
    fn restrictions_reproduce_classical_formulas() {
        let g = Grid2D::new(Grid1D::new(1.2, 21).unwrap(), Grid1D::new(0.9, 17).unwrap());
        let nc = sample_nc(g);
        let v = Field2D::from_fn(g, |a, b| (a * b).exp());
        let u = base_representation(&nc, &v).unwrap();
        let c = to_classical(&nc);
        // x1 = 0: phi1; x2 = 0: psi1
        assert!(u.restrict_x1(0).max_abs_diff(c.phi[0].value()) <= 1e-13);
        assert!(u.restrict_x2(0).max_abs_diff(c.psi[0].value()) <= 1e-13);
        let jet = reconstruct_jet(&nc, &v).unwrap();
        assert!(jet.get(MixedOrder::VALUE).max_abs_diff(&u) <= 1e-13);
        assert!(
            jet.get(MixedOrder::new(1, 0).unwrap())
                .restrict_x1(0)
                .max_abs_diff(c.phi[1].value())
                <= 1e-13
        );
    }

    #[test]
    fn traces_and_corners_recovered() {
        let g = Grid2D::new(Grid1D::new(1.2, 21).unwrap(), Grid1D::new(0.9, 17).unwrap());
        let nc = sample_nc(g);
        let v = Field2D::from_fn(g, |a, b| 3.0 + a * b);
        let jet = reconstruct_jet(&nc, &v).unwrap();
        for j in 0..4 {
            let tr = jet.get(MixedOrder::new(2, j).unwrap()).restrict_x2(0);
            assert!(tr.max_abs_diff(&nc.edge_x1[j]) <= 1e-14);
            assert_eq!(
                boundary_part(&nc, MixedOrder::new(2, j).unwrap()).restrict_x2(0),
                nc.edge_x1[j]
            );
        }
        for i in 0..2 {
            let tr = jet.get(MixedOrder::new(i, 4).unwrap()).restrict_x1(0);
            assert!(tr.max_abs_diff(&nc.edge_x2[i]) <= 1e-14);
            for j in 0..4 {
                assert_eq!(
                    jet.get(MixedOrder::new(i, j).unwrap()).at(0, 0),
                    nc.corner[i][j]
                );
            }
        }
        assert_eq!(jet.density(), &v);
    }

    #[test]
    fn boundary_part_value_matches_base() {
        let g = unit(13);
        let nc = sample_nc(g);
        assert_eq!(
            boundary_part(&nc, MixedOrder::VALUE),
            base_representation(&nc, &Field2D::zeros(g)).unwrap()
        );
        assert_eq!(boundary_part(&nc, MixedOrder::DENSITY), Field2D::zeros(g));
    }

    #[test]
    fn grid_mismatch() {
        let nc = NonClassicalData::zeros(unit(9));
        assert!(matches!(
            base_representation(&nc, &Field2D::zeros(unit(5))),
            Err(Error::GridMismatch(_))
        ));
        assert!(reconstruct_jet(&nc, &Field2D::zeros(unit(5))).is_err());
    }

    #[test]
    fn jointly_linear() {
        let g = unit(17);
        let x = sample_nc(g);
        let y = NonClassicalData::zeros(g)
            .axpy(-0.7, &sample_nc(g))
            .unwrap();
        let y = {
            let mut y = y;
            y.corner[1][2] = 4.0;
            y
        };
        let vx = Field2D::from_fn(g, |a, b| a.cos() + b);
        let vy = Field2D::from_fn(g, |a, b| a * b * b);
        let (a, b) = (1.3, -2.1);
        let combo = x.scale(a).axpy(b, &y).unwrap();
        let vc = vx.scale(a).axpy(b, &vy).unwrap();
        let lhs = reconstruct_jet(&combo, &vc).unwrap();
        let jx = reconstruct_jet(&x, &vx).unwrap();
        let jy = reconstruct_jet(&y, &vy).unwrap();
        for o in MixedOrder::all() {
            let rhs = jx.get(o).scale(a).axpy(b, jy.get(o)).unwrap();
            assert!(lhs.get(o).max_abs_diff(&rhs) <= 1e-12, "{o}");
        }
    }
}
