use super::{trapezoid_weights, Field1D, Field2D, Grid1D};
use crate::error::{Error, Result};
use crate::representation::{JetField, MixedOrder};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X1 => Axis::X2,
            Axis::X2 => Axis::X1,
        }
    }
}

/// Validated integrability exponent, `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norm(f64);

impl Norm {
    pub const SUP: Norm = Norm(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "norm exponent must lie in [1, inf], got {p}"
            )));
        }
        Ok(Norm(p))
    }

    pub fn p(self) -> f64 {
        self.0
    }

    pub fn is_sup(self) -> bool {
        self.0.is_infinite()
    }

    /// `(sum w_k |v_k|^p)^(1/p)`, or `max |v_k|` for the sup norm.
    fn weighted<T: Scalar>(self, pairs: impl Iterator<Item = (T, T)>) -> T {
        if self.is_sup() {
            return pairs.fold(T::zero(), |m, (_, v)| m.max(v.abs()));
        }
        let p = T::lit(self.0);
        if self.0 == 1.0 {
            return pairs.fold(T::zero(), |s, (w, v)| s + w * v.abs());
        }
        let sum = pairs.fold(T::zero(), |s, (w, v)| s + w * v.abs().powf(p));
        sum.powf(T::one() / p)
    }

    fn on_slice<T: Scalar>(self, grid: &Grid1D<T>, values: &[T]) -> T {
        let w = trapezoid_weights(grid);
        self.weighted(w.into_iter().zip(values.iter().copied()))
    }
}

/// Fields that carry trapezoid quadrature weights for their grid.
pub trait Weighted<T: Scalar> {
    /// `(weight, value)` per node.
    fn weighted_values(&self) -> Vec<(T, T)>;
}

impl<T: Scalar> Weighted<T> for Field1D<T> {
    fn weighted_values(&self) -> Vec<(T, T)> {
        trapezoid_weights(self.grid())
            .into_iter()
            .zip(self.values().iter().copied())
            .collect()
    }
}

impl<T: Scalar> Weighted<T> for Field2D<T> {
    fn weighted_values(&self) -> Vec<(T, T)> {
        let grid = self.grid();
        let w1 = trapezoid_weights(&grid.g1);
        let w2 = trapezoid_weights(&grid.g2);
        let n2 = w2.len();
        self.values()
            .iter()
            .enumerate()
            .map(|(idx, &v)| (w1[idx / n2] * w2[idx % n2], v))
            .collect()
    }
}

/// Discrete `L_p` norm (composite trapezoid of `|f|^p`, then the `1/p` power;
/// max of `|f|` for `p = inf`).
pub fn lp_norm<T: Scalar, F: Weighted<T>>(f: &F, p: f64) -> Result<T> {
    Ok(Norm::new(p)?.weighted(f.weighted_values().into_iter()))
}

/// Mixed norm: the `inner_p` norm along `inner_axis` at every node of the
/// other axis, followed by the `outer_p` norm of that profile.
///
/// `L^{x1,x2}_{inf,p}` is `mixed_norm(f, Axis::X2, p, inf)`: sup over `x1` of
/// the `L_p` norm in `x2`. `L^{x1,x2}_{p,inf}` is `mixed_norm(f, Axis::X2, inf, p)`.
pub fn mixed_norm<T: Scalar>(
    f: &Field2D<T>,
    inner_axis: Axis,
    inner_p: f64,
    outer_p: f64,
) -> Result<T> {
    let inner = Norm::new(inner_p)?;
    let outer = Norm::new(outer_p)?;
    let grid = f.grid();
    let (n1, n2) = grid.shape();
    let profile: Vec<T> = match inner_axis {
        Axis::X2 => (0..n1)
            .map(|k1| inner.on_slice(&grid.g2, f.row(k1)))
            .collect(),
        Axis::X1 => (0..n2)
            .map(|k2| {
                let column: Vec<T> = (0..n1).map(|k1| f.at(k1, k2)).collect();
                inner.on_slice(&grid.g1, &column)
            })
            .collect(),
    };
    Ok(outer.on_slice(grid.axis(inner_axis.other()), &profile))
}

/// Discrete `W_p^{(2,4)}` norm: sum of the fifteen `L_p` norms of the jet.
pub fn sobolev_norm_2_4<T: Scalar>(jet: &JetField<T>, p: f64) -> Result<T> {
    let mut total = T::zero();
    for order in MixedOrder::all() {
        total += lp_norm(jet.get(order), p)?;
    }
    Ok(total)
}
