//! Uniform grids on `[0, 1]`, tabulated complex functions and cumulative
//! integration.
//!
//! Every recursive integral in the crate goes through
//! [`cumulative_integral`] (or its double-double twin used internally by
//! the basis builder). The rule is composite Simpson on consecutive node
//! pairs. Odd nodes add the integral of the local cubic interpolant over
//! one subinterval to the preceding even node, so every node is exact for
//! cubics and the whole output is fourth-order accurate.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};

/// Grid size used when none is given.
pub const DEFAULT_POINTS: usize = 20001;

/// Smallest modulus accepted as a divisor by [`pointwise`].
pub const DIVISION_FLOOR: f64 = 1e-14;

/// Uniform grid with an odd number of nodes on `[0, 1]`.
///
/// Node `i` is the correctly rounded value of `i / (n_points - 1)`, so the
/// last node is exactly `1.0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformGrid {
    n_points: usize,
}

impl UniformGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 5 || n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(n_points));
        }
        Ok(UniformGrid { n_points })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn a(&self) -> f64 {
        0.0
    }

    pub fn b(&self) -> f64 {
        1.0
    }

    pub fn intervals(&self) -> usize {
        self.n_points - 1
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.intervals() as f64
    }

    pub(crate) fn spacing_dd(&self) -> Dd {
        Dd::ratio(1, self.intervals() as i64)
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.intervals() as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }
}

impl Default for UniformGrid {
    fn default() -> Self {
        UniformGrid {
            n_points: DEFAULT_POINTS,
        }
    }
}

/// A complex-valued function tabulated on a [`UniformGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch {
                left: grid.n_points(),
                right: values.len(),
            });
        }
        if let Some(node) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { node });
        }
        Ok(SampledFunction { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: UniformGrid, c: Complex64) -> Self {
        SampledFunction {
            grid,
            values: vec![c; grid.n_points()],
        }
    }

    pub(crate) fn from_raw(grid: UniformGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        SampledFunction { grid, values }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn first(&self) -> Complex64 {
        self.values[0]
    }

    pub fn last(&self) -> Complex64 {
        self.values[self.values.len() - 1]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest nodewise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SampledFunction) -> Result<f64> {
        check_same_grid(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<SampledFunction> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn mul(&self, g: &SampledFunction) -> Result<SampledFunction> {
        pointwise(PointwiseOp::Multiply, self, Operand::Function(g))
    }

    pub fn div(&self, g: &SampledFunction) -> Result<SampledFunction> {
        pointwise(PointwiseOp::Divide, self, Operand::Function(g))
    }

    pub fn add(&self, g: &SampledFunction) -> Result<SampledFunction> {
        pointwise(PointwiseOp::Add, self, Operand::Function(g))
    }

    pub fn scale(&self, c: Complex64) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointwiseOp {
    Multiply,
    Divide,
    Add,
    Scale,
}

/// Right-hand operand of [`pointwise`].
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    Function(&'a SampledFunction),
    Scalar(Complex64),
}

fn check_same_grid(f: &SampledFunction, g: &SampledFunction) -> Result<()> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch {
            left: f.grid.n_points(),
            right: g.grid.n_points(),
        });
    }
    Ok(())
}

/// Elementwise arithmetic. A scalar operand is broadcast over the grid.
pub fn pointwise(op: PointwiseOp, f: &SampledFunction, g: Operand<'_>) -> Result<SampledFunction> {
    let n = f.grid.n_points();
    let rhs = |i: usize| match g {
        Operand::Function(g) => g.values[i],
        Operand::Scalar(c) => c,
    };
    if let Operand::Function(g) = g {
        check_same_grid(f, g)?;
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.values[i];
        let b = rhs(i);
        let v = match op {
            PointwiseOp::Multiply | PointwiseOp::Scale => a * b,
            PointwiseOp::Add => a + b,
            PointwiseOp::Divide => {
                let modulus = b.norm();
                if modulus < DIVISION_FLOOR {
                    return Err(Error::DivisionBySmall { node: i, modulus });
                }
                a / b
            }
        };
        out.push(v);
    }
    SampledFunction::new(f.grid, out)
}

/// Scalars the cumulative rule can run on.
pub(crate) trait GridScalar: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, w: Dd) -> Self;
}

impl GridScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scale(self, w: Dd) -> Self {
        self * w.to_f64()
    }
}

impl GridScalar for CDd {
    fn zero() -> Self {
        CDd::ZERO
    }
    fn scale(self, w: Dd) -> Self {
        CDd::scale(self, w)
    }
}

/// Cumulative composite Simpson on `values` with node spacing `h`.
///
/// `values.len()` must be odd and at least 5; callers validate through
/// [`UniformGrid`].
pub(crate) fn cumulative_simpson<T: GridScalar>(values: &[T], h: Dd) -> Vec<T> {
    let n = values.len();
    debug_assert!(n >= 5 && n % 2 == 1);
    let w_pair = h / Dd::from(3.0);
    let w_quarter = h / Dd::from(24.0);
    let mut out = vec![T::zero(); n];
    let mut acc = T::zero();
    for j in (0..n - 2).step_by(2) {
        let (f0, f1, f2) = (values[j], values[j + 1], values[j + 2]);
        let half = if j + 3 < n {
            // ∫ over [x_j, x_{j+1}] of the cubic through x_j..x_{j+3}
            let f3 = values[j + 3];
            times(f0, 9) + times(f1, 19) - times(f2, 5) + f3
        } else {
            // last pair: cubic through x_{j-1}..x_{j+2}, second subinterval
            let fm = values[j - 1];
            times(f0, 13) + times(f1, 13) - fm - f2
        };
        out[j + 1] = acc + half.scale(w_quarter);
        acc = acc + (f0 + times(f1, 4) + f2).scale(w_pair);
        out[j + 2] = acc;
    }
    out
}

// Small integer multiples by repeated addition; exact in both scalar types.
#[inline]
fn times<T: GridScalar>(v: T, k: u32) -> T {
    let mut acc = T::zero();
    let mut base = v;
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base;
        }
        base = base + base;
        k >>= 1;
    }
    acc
}

/// `g(x_i) = ∫_0^{x_i} f(s) ds` on the grid of `f`.
pub fn cumulative_integral(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = UniformGrid::new(f.grid.n_points())?;
    let out = cumulative_simpson(&f.values, grid.spacing_dd());
    SampledFunction::new(grid, out)
}
