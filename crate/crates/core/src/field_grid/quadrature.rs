use super::{Field1D, Grid1D};
use crate::scalar::{taylor_monomial, Scalar};

/// Composite trapezoid weights over the whole grid.
pub fn trapezoid_weights<T: Scalar>(grid: &Grid1D<T>) -> Vec<T> {
    let h = grid.spacing();
    let half = h / T::lit(2.0);
    let n = grid.node_count();
    (0..n)
        .map(|k| if k == 0 || k == n - 1 { half } else { h })
        .collect()
}

/// Weight of node `m` in the trapezoid rule for `int_0^{x_k}` (`m <= k`).
#[inline]
pub(crate) fn running_weight<T: Scalar>(k: usize, m: usize, h: T, half: T) -> T {
    if k == 0 {
        T::zero()
    } else if m == 0 || m == k {
        half
    } else {
        h
    }
}

/// At every node `x_k`, the composite trapezoid approximation of
/// `int_0^{x_k} kernel(x_k, s) f(s) ds`; zero at `k = 0`.
pub fn cumulative_volterra_1d<T, K>(kernel: K, f: &Field1D<T>) -> Field1D<T>
where
    T: Scalar,
    K: Fn(T, T) -> T,
{
    let grid = *f.grid();
    let h = grid.spacing();
    let half = h / T::lit(2.0);
    let nodes = grid.nodes();
    let values = (0..nodes.len())
        .map(|k| {
            let x = nodes[k];
            (0..=k).fold(T::zero(), |acc, m| {
                acc + running_weight(k, m, h, half) * kernel(x, nodes[m]) * f.at(m)
            })
        })
        .collect();
    Field1D::from_raw(grid, values)
}

/// Lower-triangular trapezoid matrix for `int_0^{x_k} (x_k - s)^n / n! f(s) ds`.
#[derive(Debug, Clone)]
pub(crate) struct TaylorKernel<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> TaylorKernel<T> {
    pub(crate) fn new(grid: &Grid1D<T>, power: usize) -> Self {
        let h = grid.spacing();
        let half = h / T::lit(2.0);
        let nodes = grid.nodes();
        let rows = (0..nodes.len())
            .map(|k| {
                (0..=k)
                    .map(|m| {
                        running_weight(k, m, h, half) * taylor_monomial(nodes[k] - nodes[m], power)
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    #[inline]
    pub(crate) fn row(&self, k: usize) -> &[T] {
        &self.rows[k]
    }

    #[inline]
    pub(crate) fn diag(&self, k: usize) -> T {
        self.rows[k][k]
    }

    pub(crate) fn apply(&self, f: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(f)
                    .fold(T::zero(), |acc, (&w, &v)| acc + w * v)
            })
            .collect()
    }
}

/// `int_0^{x_k} (x_k - s)^n / n! f(s) ds` at every node.
pub(crate) fn taylor_integral<T: Scalar>(f: &Field1D<T>, power: usize) -> Field1D<T> {
    Field1D::from_raw(
        *f.grid(),
        TaylorKernel::new(f.grid(), power).apply(f.values()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_input_gives_zero() {
        let g = Grid1D::unit(9).unwrap();
        let out = cumulative_volterra_1d(|x: f64, s| (x - s).exp(), &Field1D::zeros(g));
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constants_reproduce_nodes() {
        let g = Grid1D::new(2.5_f64, 17).unwrap();
        let out = cumulative_volterra_1d(|_, _| 1.0, &Field1D::constant(g, 1.0));
        for (k, &v) in out.values().iter().enumerate() {
            assert!((v - g.node(k)).abs() <= 1e-14);
        }
    }

    #[test]
    fn linear_kernel_exact() {
        let g = Grid1D::unit(65).unwrap();
        let out = cumulative_volterra_1d(|x: f64, s| x - s, &Field1D::constant(g, 1.0));
        for (k, &v) in out.values().iter().enumerate() {
            let x = g.node(k);
            assert!((v - x * x / 2.0).abs() <= 1e-12);
        }
        assert_eq!(out.at(0), 0.0);
    }

    #[test]
    fn taylor_kernel_matches_generic_route() {
        let g = Grid1D::new(1.3_f64, 33).unwrap();
        let f = Field1D::from_fn(g, |s| (2.0 * s).cos() + s);
        for n in 0..4 {
            let a = taylor_integral(&f, n);
            let b = cumulative_volterra_1d(|x, s| taylor_monomial(x - s, n), &f);
            assert!(a.max_abs_diff(&b) <= 1e-15);
        }
    }

    #[test]
    fn weights_sum_to_length() {
        let g = Grid1D::new(3.0_f64, 7).unwrap();
        let s: f64 = trapezoid_weights(&g).iter().sum();
        assert!((s - 3.0).abs() < 1e-14);
    }

    proptest! {
        // kernel(x, s) f(s) linear in s for each x: exact.
        #[test]
        fn exact_for_degree_one_integrands(a in -3.0_f64..3.0, b in -3.0_f64..3.0, c in -3.0_f64..3.0, len in 0.1_f64..4.0) {
            let g = Grid1D::new(len, 21).unwrap();
            let f = Field1D::from_fn(g, |s| a + b * s);
            let out = cumulative_volterra_1d(|x, _| c * x + 1.0, &f);
            for k in 0..g.node_count() {
                let x = g.node(k);
                let exact = (c * x + 1.0) * (a * x + b * x * x / 2.0);
                prop_assert!((out.at(k) - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
            }
        }
    }
}
