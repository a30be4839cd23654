//! Images of Chebyshev polynomials under the transmutation operator and
//! the characteristic function built from them.
//!
//! The transmutation operator `T_h` (with `h = f'(0)`) maps `x^k` to `φ_k`,
//! so the image of any polynomial is the same linear combination of the
//! `φ_k` as the polynomial is of monomials. Expanding `sin βx` in
//! Chebyshev polynomials,
//!
//! ```text
//! sin βx = 2 Σ_{m>=0} (-1)^m J_(2m+1)(β) T_(2m+1)(x)
//! ```
//!
//! and truncating after `m = N` gives
//!
//! ```text
//! Φ(β) = 2 Σ_{m=0..N} (-1)^m J_(2m+1)(β) [T_h T_(2m+1)](1),
//! ```
//!
//! the value at `x = 1` of the solution of `u'' - q u = -β² u` with
//! `u(0) = 0`, `u'(0) = β`. Its positive zeros are the Dirichlet
//! eigenvalues `β²`. The kernel of `T_h` is never formed.

use num_complex::Complex64;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::quadrature::{SampledFunction, UniformGrid};
use crate::specfun::bessel_j_sequence;
use crate::spps::PhiBasis;

pub const MAX_CHEBYSHEV_ORDER: usize = 60;
pub const DEFAULT_TRUNCATION: usize = 18;

/// Largest `|β|` accepted by the characteristic functions.
pub const MAX_BETA: f64 = 200.0;

/// Monomial coefficients of `T_0..T_n`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebyshevTable {
    rows: Vec<Vec<i128>>,
}

/// Builds the table from `T_(n+1) = 2x T_n - T_(n-1)`.
pub fn chebyshev_table(n_max: usize) -> Result<ChebyshevTable> {
    if n_max > MAX_CHEBYSHEV_ORDER {
        return Err(Error::ChebyshevRange(n_max));
    }
    let mut rows: Vec<Vec<i128>> = vec![vec![1]];
    if n_max >= 1 {
        rows.push(vec![0, 1]);
    }
    for n in 2..=n_max {
        let mut next = vec![0i128; n + 1];
        for (j, &c) in rows[n - 1].iter().enumerate() {
            next[j + 1] += 2 * c;
        }
        for (j, &c) in rows[n - 2].iter().enumerate() {
            next[j] -= c;
        }
        rows.push(next);
    }
    Ok(ChebyshevTable { rows })
}

impl ChebyshevTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[i128] {
        &self.rows[n]
    }

    /// Coefficient of `x^j` in `T_n` (rounded to `f64` for `n > 38`).
    pub fn coeff(&self, n: usize, j: usize) -> f64 {
        self.rows[n].get(j).copied().unwrap_or(0) as f64
    }

    /// `T_n(x)` by Horner's rule on the monomial coefficients.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.rows[n].iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

/// `[T_h T_n](1)` for `n = 0..=n_max`, optionally the whole-grid images.
#[derive(Clone, Debug)]
pub struct TransmutedImages {
    g: Vec<Complex64>,
    profiles: Option<Vec<SampledFunction>>,
    grid: UniformGrid,
}

fn check_lengths(basis: &PhiBasis, table: &ChebyshevTable) -> Result<()> {
    if table.n_max() > basis.k_max() {
        return Err(Error::BasisTooShort {
            required: table.n_max(),
            available: basis.k_max(),
        });
    }
    Ok(())
}

/// Endpoint images `G[n] = Σ_j c_nj φ_j(1)`.
///
/// The sum cancels heavily (coefficients of `T_37` reach 1e14 while `G` is
/// O(1)), so it is formed in double-double from the extended endpoint
/// values and exact integer coefficients.
pub fn transmuted_images(basis: &PhiBasis, table: &ChebyshevTable) -> Result<TransmutedImages> {
    check_lengths(basis, table)?;
    let ends = basis.phi_at_1_ext();
    let g = (0..=table.n_max())
        .map(|n| {
            table
                .row(n)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .fold(CDd::ZERO, |acc, (j, &c)| acc + ends[j].scale(Dd::from_i128(c)))
                .to_c64()
        })
        .collect();
    Ok(TransmutedImages {
        g,
        profiles: None,
        grid: basis.grid(),
    })
}

/// As [`transmuted_images`], also forming `T_h T_n` at every node.
///
/// The whole-grid families are stored in `f64`, so high-order profiles
/// near `x = 1` carry the cancellation error of the monomial form; they are
/// only weighted by `J_n(β)` with `n` large when `β` is large.
pub fn transmuted_images_with_profiles(basis: &PhiBasis, table: &ChebyshevTable) -> Result<TransmutedImages> {
    let mut images = transmuted_images(basis, table)?;
    let grid = basis.grid();
    let profiles = (0..=table.n_max())
        .map(|n| {
            let mut acc = vec![CDd::ZERO; grid.n_points()];
            for (j, &c) in table.row(n).iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let w = Dd::from_i128(c);
                for (a, v) in acc.iter_mut().zip(basis.phi(j).values()) {
                    *a += CDd::from(*v).scale(w);
                }
            }
            SampledFunction::new(grid, acc.into_iter().map(|v| v.to_c64()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    images.profiles = Some(profiles);
    Ok(images)
}

impl TransmutedImages {
    /// `G[n] = [T_h T_n](1)`.
    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    pub fn n_max(&self) -> usize {
        self.g.len() - 1
    }

    pub fn profile(&self, n: usize) -> Option<&SampledFunction> {
        self.profiles.as_ref().map(|p| &p[n])
    }

    pub fn has_profiles(&self) -> bool {
        self.profiles.is_some()
    }
}

/// The truncated transmuted sine/cosine expansions with `N + 1` terms.
#[derive(Clone, Debug)]
pub struct TransmutationChar {
    images: TransmutedImages,
    n: usize,
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta.abs() > MAX_BETA {
        return Err(Error::BesselRange { order: 0, x: beta });
    }
    Ok(())
}

impl TransmutationChar {
    pub fn new(images: TransmutedImages, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidProblem("truncation N must be at least 1".into()));
        }
        if 2 * n + 1 > images.n_max() {
            return Err(Error::BasisTooShort {
                required: 2 * n + 1,
                available: images.n_max(),
            });
        }
        Ok(TransmutationChar { images, n })
    }

    /// Builds table, images and truncation in one go.
    pub fn from_basis(basis: &PhiBasis, n: usize, with_profiles: bool) -> Result<Self> {
        let table = chebyshev_table(2 * n + 1)?;
        let images = if with_profiles {
            transmuted_images_with_profiles(basis, &table)?
        } else {
            transmuted_images(basis, &table)?
        };
        Self::new(images, n)
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &TransmutedImages {
        &self.images
    }

    /// Expansion weights `2 (-1)^m J_(2m+1)(β)`, m = 0..=N.
    fn sine_weights(&self, beta: f64) -> Result<Vec<f64>> {
        check_beta(beta)?;
        let j = bessel_j_sequence(2 * self.n + 1, beta)?;
        Ok((0..=self.n)
            .map(|m| {
                let s = if m % 2 == 0 { 2.0 } else { -2.0 };
                s * j[2 * m + 1]
            })
            .collect())
    }

    /// Weights of `T_0, T_2, .., T_2N` in the cosine expansion:
    /// `J_0(β)` then `2 (-1)^m J_2m(β)`.
    fn cosine_weights(&self, beta: f64) -> Result<Vec<f64>> {
        check_beta(beta)?;
        let j = bessel_j_sequence(2 * self.n, beta)?;
        Ok((0..=self.n)
            .map(|m| match m {
                0 => j[0],
                _ if m % 2 == 0 => 2.0 * j[2 * m],
                _ => -2.0 * j[2 * m],
            })
            .collect())
    }

    /// `Φ(β) ≈ [T_h sin βx](1)`.
    pub fn phi_char(&self, beta: f64) -> Result<Complex64> {
        let w = self.sine_weights(beta)?;
        let g = self.images.g();
        Ok(w.iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (m, &wm)| acc + g[2 * m + 1] * wm))
    }

    /// `[T_h cos βx](1)`: the solution with `u(0) = 1`, `u'(0) = h`.
    pub fn phi_cos_char(&self, beta: f64) -> Result<Complex64> {
        let w = self.cosine_weights(beta)?;
        let g = self.images.g();
        Ok(w.iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (m, &wm)| acc + g[2 * m] * wm))
    }

    fn combine_profiles(&self, weights: &[f64], offset: usize) -> Result<SampledFunction> {
        let profiles = self.images.profiles.as_ref().ok_or(Error::MissingProfiles)?;
        let mut acc = vec![Complex64::new(0.0, 0.0); self.images.grid.n_points()];
        for (m, &wm) in weights.iter().enumerate() {
            for (a, v) in acc.iter_mut().zip(profiles[2 * m + offset].values()) {
                *a += v * wm;
            }
        }
        SampledFunction::new(self.images.grid, acc)
    }

    /// `T_h sin βx` on the whole grid.
    pub fn transmute_sin(&self, beta: f64) -> Result<SampledFunction> {
        let w = self.sine_weights(beta)?;
        self.combine_profiles(&w, 1)
    }

    /// `T_h cos βx` on the whole grid.
    pub fn transmute_cos(&self, beta: f64) -> Result<SampledFunction> {
        let w = self.cosine_weights(beta)?;
        self.combine_profiles(&w, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spps::{build_phi_basis, spps_solution, Branch, ParticularSolution, Potential};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn free_basis(n: usize, k_max: usize) -> PhiBasis {
        let g = UniformGrid::new(n).unwrap();
        let q = Potential::zero(g);
        let one = SampledFunction::constant(g, c(1.0));
        let zero = SampledFunction::constant(g, c(0.0));
        let p = ParticularSolution::from_samples(&one, &zero).unwrap();
        PhiBasis::from_particular(&q, &p, k_max).unwrap()
    }

    #[test]
    fn low_rows() {
        let t = chebyshev_table(3).unwrap();
        assert_eq!(t.row(0), &[1]);
        assert_eq!(t.row(1), &[0, 1]);
        assert_eq!(t.row(2), &[-1, 0, 2]);
        assert_eq!(t.row(3), &[0, -3, 0, 4]);
    }

    #[test]
    fn table_invariants() {
        let t = chebyshev_table(60).unwrap();
        for n in 1..=60 {
            let row = t.row(n);
            assert_eq!(row[n], 1i128 << (n - 1), "leading n={n}");
            assert_eq!(row.iter().sum::<i128>(), 1, "row sum n={n}");
            for (j, &cj) in row.iter().enumerate() {
                if (n - j) % 2 == 1 {
                    assert_eq!(cj, 0);
                }
            }
        }
        assert!(matches!(chebyshev_table(61), Err(Error::ChebyshevRange(61))));
    }

    #[test]
    fn row_37_matches_trigonometric_definition() {
        let t = chebyshev_table(37).unwrap();
        let x: f64 = 0.3;
        let want = (37.0 * x.acos()).cos();
        assert!((t.eval(37, x) - want).abs() < 1e-9);
    }

    #[test]
    fn sine_expansion_reproduces_sine() {
        // trigonometric Chebyshev values, independent of the table
        for &beta in &[1.0, 10.0, 30.0] {
            let j = bessel_j_sequence(81, beta).unwrap();
            let mut worst = 0.0f64;
            for i in 0..=2000 {
                let x = -1.0 + i as f64 / 1000.0;
                let theta = x.clamp(-1.0, 1.0).acos();
                let s: f64 = (0..=40)
                    .map(|m| {
                        let sign = if m % 2 == 0 { 2.0 } else { -2.0 };
                        sign * j[2 * m + 1] * ((2 * m + 1) as f64 * theta).cos()
                    })
                    .sum();
                worst = worst.max((s - (beta * x).sin()).abs());
            }
            assert!(worst < 1e-12, "beta={beta}: {worst}");
        }
    }

    #[test]
    fn tail_weight_bound() {
        for i in 0..=140 {
            let beta = i as f64 * 0.1;
            let j = bessel_j_sequence(37, beta).unwrap();
            assert!(j[37].abs() < 1e-12, "beta={beta}");
        }
        let j = bessel_j_sequence(37, 25.0).unwrap();
        assert!((j[37] - 3.556e-5).abs() < 1e-7);
    }

    #[test]
    fn free_images_are_one() {
        let b = free_basis(20001, 37);
        let t = chebyshev_table(37).unwrap();
        let im = transmuted_images(&b, &t).unwrap();
        assert_eq!(im.g()[0], b.f().last());
        // the h^4 quadrature error of φ_j(1) grows like j^4 and the
        // recombination differentiates it a few more times
        for (n, g) in im.g().iter().enumerate() {
            let tol = if n <= 12 { 1e-11 } else { 2e-7 };
            assert!((g - c(1.0)).norm() < tol, "n={n}: {g}");
        }
    }

    #[test]
    fn basis_too_short() {
        let b = free_basis(101, 5);
        let t = chebyshev_table(9).unwrap();
        assert!(matches!(
            transmuted_images(&b, &t),
            Err(Error::BasisTooShort { required: 9, available: 5 })
        ));
        assert!(TransmutationChar::from_basis(&b, 3, false).is_err());
    }

    #[test]
    fn free_characteristic_is_sine() {
        let b = free_basis(20001, 37);
        let ch = TransmutationChar::from_basis(&b, 18, true).unwrap();
        assert_eq!(ch.phi_char(0.0).unwrap(), c(0.0));
        assert!(ch.phi_char(PI).unwrap().norm() < 1e-10);
        for &beta in &[0.5, 2.0, 7.0] {
            assert!((ch.phi_char(beta).unwrap() - c(beta.sin())).norm() < 1e-10);
            assert!((ch.phi_cos_char(beta).unwrap() - c(beta.cos())).norm() < 1e-10);
        }
        let u = ch.transmute_sin(PI).unwrap();
        let want = SampledFunction::from_fn(b.grid(), |x| c((PI * x).sin())).unwrap();
        assert!(u.max_abs_diff(&want).unwrap() < 1e-10);
        let u = ch.transmute_cos(PI).unwrap();
        let want = SampledFunction::from_fn(b.grid(), |x| c((PI * x).cos())).unwrap();
        assert!(u.max_abs_diff(&want).unwrap() < 1e-10);
    }

    #[test]
    fn profiles_required_for_whole_grid() {
        let b = free_basis(101, 9);
        let ch = TransmutationChar::from_basis(&b, 4, false).unwrap();
        assert!(matches!(ch.transmute_sin(1.0), Err(Error::MissingProfiles)));
        assert!(ch.phi_char(250.0).is_err());
    }

    #[test]
    fn constant_potential_eigenvalue() {
        let g = UniformGrid::new(4001).unwrap();
        let q = Potential::real_fn(g, |_| 1.0).unwrap();
        let b = build_phi_basis(&q, 37).unwrap();
        let ch = TransmutationChar::from_basis(&b, 18, false).unwrap();
        let beta = (1.0 + PI * PI).sqrt();
        assert!(ch.phi_char(beta).unwrap().norm() < 1e-8);
    }

    #[test]
    fn small_beta_matches_spps() {
        let g = UniformGrid::new(4001).unwrap();
        let q = Potential::real_fn(g, |t| 1.0 + t * t).unwrap();
        let b = build_phi_basis(&q, 40).unwrap();
        let ch = TransmutationChar::from_basis(&b, 18, true).unwrap();
        let beta = 0.1;
        let u = ch.transmute_sin(beta).unwrap();
        let u2 = spps_solution(&b, c(-beta * beta), Branch::U2, 1e-16).unwrap();
        assert!(u.max_abs_diff(&u2.u.scale(c(beta))).unwrap() < 1e-8);
        // initial values: u(0) = 0, u'(0) ≈ β
        assert!(u.first().norm() < 1e-15);
        let d0 = (u.at(1) - u.first()) / g.spacing();
        assert!((d0 - c(beta)).norm() < 1e-4);
    }

    #[test]
    fn transmuted_sine_solves_the_equation() {
        // fourth-order second difference on every 20th node; the 3-point
        // quotient at full resolution would amplify f64 rounding by 1/h^2
        let g = UniformGrid::default();
        let q = Potential::real_fn(g, f64::exp).unwrap();
        let b = build_phi_basis(&q, 37).unwrap();
        let ch = TransmutationChar::from_basis(&b, 18, true).unwrap();
        let stride = 20;
        let hh = g.spacing() * stride as f64;
        for &beta in &[1.0, 4.0, 10.0] {
            let u = ch.transmute_sin(beta).unwrap();
            let at = |i: usize| u.at(i * stride);
            let mut worst = 0.0f64;
            for i in 2..(g.n_points() - 1) / stride - 1 {
                let d2 = (-at(i + 2) + at(i + 1) * 16.0 - at(i) * 30.0 + at(i - 1) * 16.0 - at(i - 2))
                    / (12.0 * hh * hh);
                let r = d2 - q.samples().at(i * stride) * at(i) + at(i) * (beta * beta);
                worst = worst.max(r.norm());
            }
            assert!(worst < 1e-5, "beta={beta}: {worst}");
        }
    }
}
