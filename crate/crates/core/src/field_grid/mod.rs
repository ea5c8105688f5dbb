//! Uniform tensor grids on `[0, h1] x [0, h2]`, node-sampled fields and
//! their discrete norms.

mod norm;
pub(crate) mod quadrature;

pub use norm::{lp_norm, mixed_norm, sobolev_norm_2_4, Axis, Norm, Weighted};
pub use quadrature::{cumulative_volterra_1d, trapezoid_weights};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform grid `x_k = k * length / N`, `k = 0..=N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    length: T,
    intervals: usize,
}

impl<T: Scalar> Grid1D<T> {
    pub fn new(length: T, node_count: usize) -> Result<Self> {
        if !(length.is_finite() && length > T::zero()) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        if node_count < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes, got {node_count}"
            )));
        }
        Ok(Self {
            length,
            intervals: node_count - 1,
        })
    }

    pub fn unit(node_count: usize) -> Result<Self> {
        Self::new(T::one(), node_count)
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn node_count(&self) -> usize {
        self.intervals + 1
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn spacing(&self) -> T {
        self.length / T::from_index(self.intervals)
    }

    /// Node coordinate; the last node is pinned to `length` exactly.
    #[inline]
    pub fn node(&self, k: usize) -> T {
        if k == self.intervals {
            self.length
        } else {
            T::from_index(k) * self.length / T::from_index(self.intervals)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.node_count()).map(|k| self.node(k)).collect()
    }

    /// True when `self` is this grid refined by an integer factor; returns the stride.
    pub fn refinement_stride(&self, fine: &Grid1D<T>) -> Option<usize> {
        if self.length != fine.length || !fine.intervals.is_multiple_of(self.intervals) {
            return None;
        }
        Some(fine.intervals / self.intervals)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D<T> {
    pub g1: Grid1D<T>,
    pub g2: Grid1D<T>,
}

impl<T: Scalar> Grid2D<T> {
    pub fn new(g1: Grid1D<T>, g2: Grid1D<T>) -> Self {
        Self { g1, g2 }
    }

    pub fn square(length: T, node_count: usize) -> Result<Self> {
        let g = Grid1D::new(length, node_count)?;
        Ok(Self { g1: g, g2: g })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.g1.node_count(), self.g2.node_count())
    }

    pub fn len(&self) -> usize {
        self.g1.node_count() * self.g2.node_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, k1: usize, k2: usize) -> usize {
        k1 * self.g2.node_count() + k2
    }

    pub fn axis(&self, axis: Axis) -> &Grid1D<T> {
        match axis {
            Axis::X1 => &self.g1,
            Axis::X2 => &self.g2,
        }
    }
}

fn check_finite<T: Scalar>(values: &[T], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Node values on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D<T> {
    grid: Grid1D<T>,
    values: Vec<T>,
}

impl<T: Scalar> Field1D<T> {
    pub fn new(grid: Grid1D<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        check_finite(&values, "Field1D")?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D<T>) -> Self {
        Self {
            grid,
            values: vec![T::zero(); grid.node_count()],
        }
    }

    pub fn constant(grid: Grid1D<T>, c: T) -> Self {
        Self {
            grid,
            values: vec![c; grid.node_count()],
        }
    }

    pub fn from_fn(grid: Grid1D<T>, f: impl Fn(T) -> T) -> Self {
        let values = (0..grid.node_count()).map(|k| f(grid.node(k))).collect();
        Self { grid, values }
    }

    pub(crate) fn from_raw(grid: Grid1D<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.node_count());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, k: usize) -> T {
        self.values[k]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| c * v)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: T, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a + c * b)
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &a| m.max(a.abs()))
    }
}

/// Node values on a [`Grid2D`], row-major by `x1` index then `x2` index.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D<T> {
    grid: Grid2D<T>,
    values: Vec<T>,
}

impl<T: Scalar> Field2D<T> {
    pub fn new(grid: Grid2D<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        check_finite(&values, "Field2D")?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self {
            grid,
            values: vec![T::zero(); grid.len()],
        }
    }

    pub fn constant(grid: Grid2D<T>, c: T) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D<T>, f: impl Fn(T, T) -> T) -> Self {
        let (n1, n2) = grid.shape();
        let mut values = Vec::with_capacity(grid.len());
        for k1 in 0..n1 {
            let x1 = grid.g1.node(k1);
            for k2 in 0..n2 {
                values.push(f(x1, grid.g2.node(k2)));
            }
        }
        Self { grid, values }
    }

    pub(crate) fn from_raw(grid: Grid2D<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2D<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn at(&self, k1: usize, k2: usize) -> T {
        self.values[self.grid.index(k1, k2)]
    }

    /// Row `k1`: the slice `x1 = x1[k1]` as a field over `x2`.
    pub fn row(&self, k1: usize) -> &[T] {
        let n2 = self.grid.g2.node_count();
        &self.values[k1 * n2..(k1 + 1) * n2]
    }

    /// Restriction to the line `x1 = x1[k1]`.
    pub fn restrict_x1(&self, k1: usize) -> Field1D<T> {
        Field1D::from_raw(self.grid.g2, self.row(k1).to_vec())
    }

    /// Restriction to the line `x2 = x2[k2]`.
    pub fn restrict_x2(&self, k2: usize) -> Field1D<T> {
        let n1 = self.grid.g1.node_count();
        Field1D::from_raw(self.grid.g1, (0..n1).map(|k1| self.at(k1, k2)).collect())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| c * v)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: T, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + c * b)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &a| m.max(a.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Subsample onto `coarse`, which must be an integer coarsening of this grid.
    pub fn restrict_to(&self, coarse: &Grid2D<T>) -> Result<Self> {
        let s1 = coarse.g1.refinement_stride(&self.grid.g1);
        let s2 = coarse.g2.refinement_stride(&self.grid.g2);
        let (Some(s1), Some(s2)) = (s1, s2) else {
            return Err(Error::GridMismatch(
                "target grid is not a coarsening".into(),
            ));
        };
        Ok(Self::from_raw(
            *coarse,
            (0..coarse.g1.node_count())
                .flat_map(|k1| (0..coarse.g2.node_count()).map(move |k2| (k1, k2)))
                .map(|(k1, k2)| self.at(k1 * s1, k2 * s2))
                .collect(),
        ))
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch("fields live on different grids".into()))
        }
    }
}
