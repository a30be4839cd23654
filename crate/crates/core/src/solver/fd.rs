//! Finite-difference reference eigenvalues.
//!
//! Second-order central differences for `-u'' + q u = λ u` on `(0, 1)` with
//! Dirichlet ends give a symmetric tridiagonal matrix; its eigenvalues are
//! isolated by Sturm-sequence bisection and Richardson-extrapolated from
//! meshes `M` and `2M`.

use crate::error::{Error, Result};

pub const DEFAULT_MESH: usize = 1000;
pub const MIN_MESH: usize = 200;

struct Tridiagonal {
    diag: Vec<f64>,
    off_sq: f64,
    off: f64,
}

impl Tridiagonal {
    fn new(q: &dyn Fn(f64) -> f64, mesh: usize) -> Self {
        let h = 1.0 / mesh as f64;
        let inv_h2 = 1.0 / (h * h);
        let diag = (1..mesh).map(|i| 2.0 * inv_h2 + q(i as f64 * h)).collect();
        Tridiagonal {
            diag,
            off_sq: inv_h2 * inv_h2,
            off: inv_h2,
        }
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - x } else { a - x - self.off_sq / d };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + x.abs() + self.off);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * self.off;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * self.off;
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based).
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        while hi - lo > 1e-15 * (lo.abs() + hi.abs()) + f64::MIN_POSITIVE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// The first `n_eigs` eigenvalues of `-u'' + q u = λ u`, `u(0) = u(1) = 0`,
/// from meshes `mesh` and `2 mesh` combined as `(4 λ_2M - λ_M) / 3`.
/// Returned alongside `|λ_extrapolated - λ_2M|` as an error indicator.
pub fn fd_eigenvalues(q: &dyn Fn(f64) -> f64, n_eigs: usize, mesh: usize) -> Result<Vec<(f64, f64)>> {
    if mesh < MIN_MESH {
        return Err(Error::InvalidProblem(format!("mesh must be at least {MIN_MESH}, got {mesh}")));
    }
    if n_eigs >= mesh {
        return Err(Error::InvalidProblem(format!(
            "mesh {mesh} supports fewer than {n_eigs} eigenvalues"
        )));
    }
    let coarse = Tridiagonal::new(q, mesh);
    let fine = Tridiagonal::new(q, 2 * mesh);
    Ok((0..n_eigs)
        .map(|k| {
            let lc = coarse.eigenvalue(k);
            let lf = fine.eigenvalue(k);
            let extrapolated = (4.0 * lf - lc) / 3.0;
            (extrapolated, (extrapolated - lf).abs())
        })
        .collect())
}

/// Number of finite-difference eigenvalues (mesh `2 mesh`) below `x`.
pub fn fd_count_below(q: &dyn Fn(f64) -> f64, x: f64, mesh: usize) -> usize {
    Tridiagonal::new(q, 2 * mesh).count_below(x)
}
