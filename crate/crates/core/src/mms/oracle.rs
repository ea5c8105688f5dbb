use crate::boundary_data::{ClassicalData, Jet1D, NonClassicalData};
use crate::field_grid::{Field1D, Field2D, Grid2D};
use crate::representation::{JetField, MixedOrder};
use crate::scalar::Scalar;

/// `u(x1, x2) = sum c[m][n] x1^m x2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySolution<T> {
    coeffs: Vec<Vec<T>>,
}

fn falling<T: Scalar>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, r| acc * T::from_index(n - r))
}

impl<T: Scalar> PolySolution<T> {
    pub fn new(coeffs: Vec<Vec<T>>) -> Self {
        Self { coeffs }
    }

    /// `scale * x1^m * x2^n`.
    pub fn monomial(scale: T, m: usize, n: usize) -> Self {
        let mut coeffs = vec![vec![T::zero(); n + 1]; m + 1];
        coeffs[m][n] = scale;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    /// Exact `D1^di D2^dj` by index shift.
    pub fn derivative(&self, di: usize, dj: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(di)
            .map(|(m, row)| {
                row.iter()
                    .enumerate()
                    .skip(dj)
                    .map(|(n, &c)| c * falling::<T>(m, di) * falling::<T>(n, dj))
                    .collect()
            })
            .collect();
        Self { coeffs }
    }

    pub fn eval(&self, x1: T, x2: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, row| {
            acc * x1 + row.iter().rev().fold(T::zero(), |r, &c| r * x2 + c)
        })
    }
}

/// `u(x1, x2) = A sin(k1 x1 + c1) sin(k2 x2 + c2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigSolution<T> {
    pub amplitude: T,
    pub k1: T,
    pub k2: T,
    pub c1: T,
    pub c2: T,
}

impl<T: Scalar> TrigSolution<T> {
    /// `sin(x1) sin(x2)`.
    pub fn unit() -> Self {
        Self {
            amplitude: T::one(),
            k1: T::one(),
            k2: T::one(),
            c1: T::zero(),
            c2: T::zero(),
        }
    }

    /// n-th derivative of `sin(k x + c)`.
    fn sin_derivative(k: T, c: T, n: usize, x: T) -> T {
        let theta = k * x + c;
        let base = match n % 4 {
            0 => theta.sin(),
            1 => theta.cos(),
            2 => -theta.sin(),
            _ => -theta.cos(),
        };
        k.powi(n as i32) * base
    }

    pub fn derivative_at(&self, di: usize, dj: usize, x1: T, x2: T) -> T {
        self.amplitude
            * Self::sin_derivative(self.k1, self.c1, di, x1)
            * Self::sin_derivative(self.k2, self.c2, dj, x2)
    }
}

/// A smooth exact solution with closed-form mixed derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum ManufacturedSolution<T> {
    Poly(PolySolution<T>),
    Trig(TrigSolution<T>),
}

impl<T: Scalar> ManufacturedSolution<T> {
    pub fn zero() -> Self {
        ManufacturedSolution::Poly(PolySolution::new(vec![vec![T::zero()]]))
    }

    /// `D1^di D2^dj u` at a point, for any orders.
    pub fn derivative_at(&self, di: usize, dj: usize, x1: T, x2: T) -> T {
        match self {
            ManufacturedSolution::Poly(p) => p.derivative(di, dj).eval(x1, x2),
            ManufacturedSolution::Trig(t) => t.derivative_at(di, dj, x1, x2),
        }
    }

    /// Exact `D1^di D2^dj u` sampled on `grid`.
    pub fn derivative_field(&self, di: usize, dj: usize, grid: &Grid2D<T>) -> Field2D<T> {
        match self {
            ManufacturedSolution::Poly(p) => {
                let d = p.derivative(di, dj);
                Field2D::from_fn(*grid, |a, b| d.eval(a, b))
            }
            ManufacturedSolution::Trig(t) => {
                Field2D::from_fn(*grid, |a, b| t.derivative_at(di, dj, a, b))
            }
        }
    }

    fn trace_x1(&self, di: usize, dj: usize, grid: &Grid2D<T>) -> Field1D<T> {
        Field1D::from_fn(grid.g1, |x| self.derivative_at(di, dj, x, T::zero()))
    }

    fn trace_x2(&self, di: usize, dj: usize, grid: &Grid2D<T>) -> Field1D<T> {
        Field1D::from_fn(grid.g2, |x| self.derivative_at(di, dj, T::zero(), x))
    }

    /// The non-classical data (corner values and edge traces) of `u`.
    pub fn nonclassical_data(&self, grid: &Grid2D<T>) -> NonClassicalData<T> {
        let mut corner = [[T::zero(); 4]; 2];
        for (i, row) in corner.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.derivative_at(i, j, T::zero(), T::zero());
            }
        }
        NonClassicalData {
            corner,
            edge_x1: std::array::from_fn(|j| self.trace_x1(2, j, grid)),
            edge_x2: std::array::from_fn(|i| self.trace_x2(i, 4, grid)),
        }
    }

    /// The classical data of `u`, with exact derivative samples.
    pub fn classical_data(&self, grid: &Grid2D<T>) -> ClassicalData<T> {
        let phi = std::array::from_fn(|i| {
            Jet1D::new((0..=4).map(|k| self.trace_x2(i, k, grid)).collect()).expect("same grid")
        });
        let psi = std::array::from_fn(|j| {
            Jet1D::new((0..=2).map(|k| self.trace_x1(k, j, grid)).collect()).expect("same grid")
        });
        ClassicalData { phi, psi }
    }

    /// All fifteen exact mixed derivatives on `grid`.
    pub fn exact_jet(&self, grid: &Grid2D<T>) -> JetField<T> {
        let entries = MixedOrder::all()
            .map(|o| (o, self.derivative_field(o.i(), o.j(), grid)))
            .collect();
        JetField::from_entries(*grid, entries).expect("complete jet")
    }
}

/// Exact `D1^i D2^j u*` on `grid`.
pub fn oracle_derivative<T: Scalar>(
    s: &ManufacturedSolution<T>,
    order: MixedOrder,
    grid: &Grid2D<T>,
) -> Field2D<T> {
    s.derivative_field(order.i(), order.j(), grid)
}
