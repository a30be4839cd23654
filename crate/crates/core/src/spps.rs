//! Spectral parameter power series.
//!
//! Given a non-vanishing solution `f` of `f'' - q f = 0` with `f(0) = 1`,
//! the recursive integrals
//!
//! ```text
//! X(0) = 1,   X(n)(x) = n ∫_0^x X(n-1)(s) (f(s)^2)^((-1)^n) ds
//! X~(0) = 1,  X~(n)(x) = n ∫_0^x X~(n-1)(s) (f(s)^2)^((-1)^(n-1)) ds
//! ```
//!
//! define `φ_k = f X(k)` (k odd), `f X~(k)` (k even) and `ψ_k = X~(k)/f`
//! (k odd), `X(k)/f` (k even). For any complex `λ` the two series
//!
//! ```text
//! u1 = Σ λ^k φ_2k / (2k)!        u2 = Σ λ^k φ_(2k+1) / (2k+1)!
//! ```
//!
//! solve `u'' - q u = λ u` with `u1(0) = 1, u1'(0) = f'(0)` and
//! `u2(0) = 0, u2'(0) = 1`. Their derivatives are assembled from the ψ
//! family without numerical differentiation.
//!
//! Everything is computed in double-double; the whole-grid families are
//! rounded to `f64` for storage while the endpoint values `φ_k(1)` keep the
//! extended precision.

use std::thread;

use num_complex::Complex64;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::quadrature::{cumulative_simpson, SampledFunction, UniformGrid};

pub const DEFAULT_K_MAX: usize = 100;
pub const DEFAULT_SERIES_TOL: f64 = 1e-16;
pub const DEFAULT_PICARD_TOL: f64 = 1e-30;
pub const DEFAULT_PICARD_ITER: usize = 1000;

/// Guard on `|f|`; the basis is undefined where the particular solution
/// vanishes.
pub const VANISHING_FLOOR: f64 = 1e-10;

/// A potential tabulated on the unit grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    q: SampledFunction,
    max_imag: f64,
}

impl Potential {
    pub fn new(q: SampledFunction) -> Self {
        let max_imag = q.values().iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
        Potential { q, max_imag }
    }

    pub fn from_fn(grid: UniformGrid, q: impl Fn(f64) -> Complex64) -> Result<Self> {
        Ok(Self::new(SampledFunction::from_fn(grid, q)?))
    }

    pub fn real_fn(grid: UniformGrid, q: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(q(x), 0.0))
    }

    pub fn zero(grid: UniformGrid) -> Self {
        Self::new(SampledFunction::constant(grid, Complex64::new(0.0, 0.0)))
    }

    pub fn samples(&self) -> &SampledFunction {
        &self.q
    }

    pub fn grid(&self) -> UniformGrid {
        self.q.grid()
    }

    pub fn is_real(&self) -> bool {
        self.max_imag == 0.0
    }

    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }

    pub fn min_real(&self) -> f64 {
        self.q.values().iter().fold(f64::INFINITY, |m, v| m.min(v.re))
    }
}

/// A non-vanishing solution of `f'' = q f` normalized to `f(0) = 1`.
#[derive(Clone, Debug)]
pub struct ParticularSolution {
    f: Vec<CDd>,
    f_prime: Vec<CDd>,
    grid: UniformGrid,
    iterations: usize,
}

impl ParticularSolution {
    /// Uses caller-supplied samples of `f` and `f'`.
    ///
    /// Nothing checks that `f` actually solves the homogeneous equation for
    /// the potential it is later paired with; this is how the free basis
    /// `f ≡ 1` is obtained for `q ≡ 0`.
    pub fn from_samples(f: &SampledFunction, f_prime: &SampledFunction) -> Result<Self> {
        if f.grid() != f_prime.grid() {
            return Err(Error::GridMismatch {
                left: f.grid().n_points(),
                right: f_prime.grid().n_points(),
            });
        }
        if (f.first() - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(Error::InvalidProblem(format!(
                "particular solution must satisfy f(0) = 1, got {}",
                f.first()
            )));
        }
        let sol = ParticularSolution {
            f: f.values().iter().map(|&v| CDd::from(v)).collect(),
            f_prime: f_prime.values().iter().map(|&v| CDd::from(v)).collect(),
            grid: f.grid(),
            iterations: 0,
        };
        sol.check_non_vanishing()?;
        Ok(sol)
    }

    fn check_non_vanishing(&self) -> Result<()> {
        for (i, v) in self.f.iter().enumerate() {
            let m = v.abs_f64();
            if m < VANISHING_FLOOR {
                return Err(Error::VanishingSolution {
                    x: self.grid.node(i),
                    modulus: m,
                });
            }
        }
        Ok(())
    }

    pub fn f(&self) -> SampledFunction {
        to_sampled(self.grid, &self.f)
    }

    pub fn f_prime(&self) -> SampledFunction {
        to_sampled(self.grid, &self.f_prime)
    }

    /// `h = f'(0)`.
    pub fn h(&self) -> Complex64 {
        self.f_prime[0].to_c64()
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

fn to_sampled(grid: UniformGrid, v: &[CDd]) -> SampledFunction {
    SampledFunction::from_raw(grid, v.iter().map(|z| z.to_c64()).collect())
}

fn sup_diff(a: &[CDd], b: &[CDd]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((*x - *y).abs_f64()))
}

fn sup(a: &[CDd]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs_f64()))
}

/// Solution of `y'' = q y` with `y(0) = y0`, `y'(0) = dy0` by Picard
/// iteration `y <- y0 + dy0 x + ∫_0^x (x - s) q(s) y(s) ds`, the kernel
/// realized as two nested cumulative integrals. Returns `(y, y', sweeps)`.
fn picard(
    q: &[CDd],
    grid: UniformGrid,
    y0: f64,
    dy0: f64,
    max_iter: usize,
    tol: f64,
) -> Result<(Vec<CDd>, Vec<CDd>, usize)> {
    let h = grid.spacing_dd();
    let start: Vec<CDd> = (0..grid.n_points())
        .map(|i| {
            let x = Dd::from(i as f64) * h;
            CDd::from_real(Dd::from(y0) + x.mul_f64(dy0))
        })
        .collect();
    let mut y = start.clone();
    let mut update = f64::INFINITY;
    for sweep in 1..=max_iter {
        let qy: Vec<CDd> = q.iter().zip(&y).map(|(a, b)| *a * *b).collect();
        let inner = cumulative_simpson(&qy, h);
        let outer = cumulative_simpson(&inner, h);
        let next: Vec<CDd> = start.iter().zip(&outer).map(|(a, b)| *a + *b).collect();
        update = sup_diff(&next, &y);
        y = next;
        if update < tol * (1.0 + sup(&y)) {
            let qy: Vec<CDd> = q.iter().zip(&y).map(|(a, b)| *a * *b).collect();
            let dy = cumulative_simpson(&qy, h)
                .into_iter()
                .map(|v| v + CDd::from_real(Dd::from(dy0)))
                .collect();
            return Ok((y, dy, sweep));
        }
    }
    Err(Error::PicardDivergence {
        iterations: max_iter,
        update,
    })
}

/// Builds `f = v1 + i v2` where `v1, v2` solve `v'' = q v` with
/// `v1(0) = 1, v1'(0) = 0, v2(0) = 0, v2'(0) = 1`.
///
/// For real `q` the zeros of `v1` and `v2` interlace, so `f` never vanishes
/// and `h = f'(0) = i`.
pub fn build_particular_solution(q: &Potential, max_iter: usize, tol: f64) -> Result<ParticularSolution> {
    let grid = q.grid();
    let qd: Vec<CDd> = q.samples().values().iter().map(|&v| CDd::from(v)).collect();
    let (first, second) = thread::scope(|s| {
        let a = s.spawn(|| picard(&qd, grid, 1.0, 0.0, max_iter, tol));
        let b = picard(&qd, grid, 0.0, 1.0, max_iter, tol);
        (a.join().expect("picard thread panicked"), b)
    });
    let (v1, d1, it1) = first?;
    let (v2, d2, it2) = second?;
    let i = CDd::new(Dd::ZERO, Dd::ONE);
    let f = v1.iter().zip(&v2).map(|(a, b)| *a + i * *b).collect();
    let f_prime = d1.iter().zip(&d2).map(|(a, b)| *a + i * *b).collect();
    let sol = ParticularSolution {
        f,
        f_prime,
        grid,
        iterations: it1.max(it2),
    };
    sol.check_non_vanishing()?;
    Ok(sol)
}

/// The families `φ_0..φ_K`, `ψ_0..ψ_K` built from a particular solution.
#[derive(Clone, Debug)]
pub struct PhiBasis {
    q: Potential,
    f: SampledFunction,
    f_prime: SampledFunction,
    log_derivative: SampledFunction,
    h: Complex64,
    phi: Vec<SampledFunction>,
    psi: Vec<SampledFunction>,
    phi_sup: Vec<f64>,
    phi_end: Vec<CDd>,
    picard_sweeps: usize,
}

/// One recursive-integral chain. `first_weight` multiplies at `n = 1`, the
/// weights then alternate. Returns `f·chain` samples for the indices that
/// land in φ and `chain/f` for the ones that land in ψ.
struct ChainOutput {
    to_phi: Vec<(usize, Vec<CDd>)>,
    to_psi: Vec<(usize, Vec<CDd>)>,
}

fn run_chain(
    grid: UniformGrid,
    f: &[CDd],
    inv_f: &[CDd],
    f2: &[CDd],
    inv_f2: &[CDd],
    k_max: usize,
    odd_weight_is_inverse: bool,
) -> ChainOutput {
    let h = grid.spacing_dd();
    let mut chain = vec![CDd::ONE; grid.n_points()];
    let mut out = ChainOutput {
        to_phi: Vec::new(),
        to_psi: Vec::new(),
    };
    for n in 1..=k_max {
        let odd = n % 2 == 1;
        let w = if odd == odd_weight_is_inverse { inv_f2 } else { f2 };
        let integrand: Vec<CDd> = chain.iter().zip(w).map(|(a, b)| *a * *b).collect();
        let k = Dd::from(n as f64);
        chain = cumulative_simpson(&integrand, h)
            .into_iter()
            .map(|v| v.scale(k))
            .collect();
        // X (inverse weight at odd n) feeds φ at odd n, ψ at even n;
        // X~ the other way round.
        let feeds_phi = odd == odd_weight_is_inverse;
        if feeds_phi {
            out.to_phi
                .push((n, chain.iter().zip(f).map(|(a, b)| *a * *b).collect()));
        } else {
            out.to_psi
                .push((n, chain.iter().zip(inv_f).map(|(a, b)| *a * *b).collect()));
        }
    }
    out
}

impl PhiBasis {
    /// Builds the basis from an explicit particular solution.
    pub fn from_particular(q: &Potential, particular: &ParticularSolution, k_max: usize) -> Result<Self> {
        let grid = q.grid();
        if particular.grid != grid {
            return Err(Error::GridMismatch {
                left: grid.n_points(),
                right: particular.grid.n_points(),
            });
        }
        if k_max < 1 {
            return Err(Error::InvalidProblem("k_max must be at least 1".into()));
        }
        let f = &particular.f;
        let inv_f: Vec<CDd> = f.iter().map(|v| CDd::ONE / *v).collect();
        let f2: Vec<CDd> = f.iter().map(|v| *v * *v).collect();
        let inv_f2: Vec<CDd> = inv_f.iter().map(|v| *v * *v).collect();

        let (x_chain, x_tilde_chain) = thread::scope(|s| {
            let a = s.spawn(|| run_chain(grid, f, &inv_f, &f2, &inv_f2, k_max, true));
            let b = run_chain(grid, f, &inv_f, &f2, &inv_f2, k_max, false);
            (a.join().expect("basis thread panicked"), b)
        });

        let mut phi_dd: Vec<Option<Vec<CDd>>> = vec![None; k_max + 1];
        let mut psi_dd: Vec<Option<Vec<CDd>>> = vec![None; k_max + 1];
        phi_dd[0] = Some(f.clone());
        psi_dd[0] = Some(inv_f.clone());
        for (n, v) in x_chain.to_phi.into_iter().chain(x_tilde_chain.to_phi) {
            phi_dd[n] = Some(v);
        }
        for (n, v) in x_chain.to_psi.into_iter().chain(x_tilde_chain.to_psi) {
            psi_dd[n] = Some(v);
        }

        let last = grid.n_points() - 1;
        let mut phi = Vec::with_capacity(k_max + 1);
        let mut psi = Vec::with_capacity(k_max + 1);
        let mut phi_sup = Vec::with_capacity(k_max + 1);
        let mut phi_end = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let p = phi_dd[k].take().expect("every phi index is produced");
            let s = psi_dd[k].take().expect("every psi index is produced");
            if let Some(node) = p.iter().chain(&s).position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    node: node % grid.n_points(),
                });
            }
            phi_end.push(p[last]);
            phi_sup.push(sup(&p));
            phi.push(to_sampled(grid, &p));
            psi.push(to_sampled(grid, &s));
        }

        let f_s = particular.f();
        let fp_s = particular.f_prime();
        let log_derivative = fp_s.div(&f_s)?;
        Ok(PhiBasis {
            q: q.clone(),
            h: particular.h(),
            f: f_s,
            f_prime: fp_s,
            log_derivative,
            phi,
            psi,
            phi_sup,
            phi_end,
            picard_sweeps: particular.iterations,
        })
    }

    pub fn grid(&self) -> UniformGrid {
        self.q.grid()
    }

    pub fn potential(&self) -> &Potential {
        &self.q
    }

    pub fn f(&self) -> &SampledFunction {
        &self.f
    }

    pub fn f_prime(&self) -> &SampledFunction {
        &self.f_prime
    }

    pub fn h(&self) -> Complex64 {
        self.h
    }

    pub fn k_max(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self, k: usize) -> &SampledFunction {
        &self.phi[k]
    }

    pub fn psi(&self, k: usize) -> &SampledFunction {
        &self.psi[k]
    }

    /// `φ_k(1)` for `k = 0..=K`.
    pub fn phi_at_1(&self) -> Vec<Complex64> {
        self.phi_end.iter().map(|v| v.to_c64()).collect()
    }

    pub(crate) fn phi_at_1_ext(&self) -> &[CDd] {
        &self.phi_end
    }

    pub fn phi_sup_norm(&self, k: usize) -> f64 {
        self.phi_sup[k]
    }

    pub fn picard_sweeps(&self) -> usize {
        self.picard_sweeps
    }

    /// `X(k)`, recovered from the stored families.
    pub fn x_family(&self, k: usize) -> Result<SampledFunction> {
        if k % 2 == 1 {
            self.phi[k].div(&self.f)
        } else {
            self.psi[k].mul(&self.f)
        }
    }

    /// `X~(k)`, recovered from the stored families.
    pub fn x_tilde_family(&self, k: usize) -> Result<SampledFunction> {
        if k % 2 == 1 {
            self.psi[k].mul(&self.f)
        } else {
            self.phi[k].div(&self.f)
        }
    }
}

/// Builds `f` by Picard iteration and then the basis, with default
/// iteration settings.
pub fn build_phi_basis(q: &Potential, k_max: usize) -> Result<PhiBasis> {
    let particular = build_particular_solution(q, DEFAULT_PICARD_ITER, DEFAULT_PICARD_TOL)?;
    PhiBasis::from_particular(q, &particular, k_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `u1(0) = f(0)`, `u1'(0) = f'(0)`
    U1,
    /// `u2(0) = 0`, `u2'(0) = 1 / f(0)`
    U2,
}

#[derive(Clone, Debug)]
pub struct SppsSolution {
    pub lambda: Complex64,
    pub which: Branch,
    pub u: SampledFunction,
    pub u_prime: SampledFunction,
    pub terms_used: usize,
}

fn lambda_for_error(lambda: Complex64) -> f64 {
    if lambda.im == 0.0 {
        lambda.re
    } else {
        lambda.norm()
    }
}

/// Sums the SPPS series for `u1` or `u2` and its derivative on the grid.
///
/// Summation stops once two consecutive terms fall below `tol` times the
/// sup norm of the partial sum (a single exactly-zero term also stops it,
/// which covers `λ = 0`).
pub fn spps_solution(basis: &PhiBasis, lambda: Complex64, which: Branch, tol: f64) -> Result<SppsSolution> {
    let n = basis.grid().n_points();
    let offset = match which {
        Branch::U1 => 0,
        Branch::U2 => 1,
    };
    let ld = basis.log_derivative.values();
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut du = vec![Complex64::new(0.0, 0.0); n];
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut quiet = 0;
    let mut k = 0usize;
    loop {
        let idx = 2 * k + offset;
        if idx > basis.k_max() {
            return Err(Error::SeriesTruncation {
                lambda: lambda_for_error(lambda),
                k_max: basis.k_max(),
            });
        }
        if k > 0 {
            coeff = coeff * lambda / ((idx * (idx - 1)) as f64);
        }
        let phi = basis.phi[idx].values();
        let mut term_sup = 0.0f64;
        if idx == 0 {
            // u1' = f' + Σ_{k>=1} ...
            let fp = basis.f_prime.values();
            for i in 0..n {
                u[i] += phi[i];
                du[i] += fp[i];
                term_sup = term_sup.max(phi[i].norm());
            }
        } else {
            let psi = basis.psi[idx - 1].values();
            let m = idx as f64;
            for i in 0..n {
                let t = coeff * phi[i];
                u[i] += t;
                du[i] += coeff * (ld[i] * phi[i] + psi[i] * m);
                term_sup = term_sup.max(t.norm());
            }
        }
        let partial_sup = u.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if term_sup == 0.0 && k > 0 {
            break;
        }
        if term_sup < tol * partial_sup {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        k += 1;
    }
    let grid = basis.grid();
    Ok(SppsSolution {
        lambda,
        which,
        u: SampledFunction::new(grid, u)?,
        u_prime: SampledFunction::new(grid, du)?,
        terms_used: k + 1,
    })
}

/// `S(λ) = u2(1; λ) = Σ λ^k φ_(2k+1)(1) / (2k+1)!` with the number of terms
/// used.
///
/// Accumulated in double-double from the extended endpoint values. The
/// stopping rule compares the sup norm of each term against the largest
/// term so far: the endpoint value itself vanishes at eigenvalues, so it
/// cannot serve as the scale.
pub fn spps_characteristic_terms(basis: &PhiBasis, lambda: Complex64, tol: f64) -> Result<(Complex64, usize)> {
    let lam = CDd::from(lambda);
    let ends = basis.phi_at_1_ext();
    let mut coeff = CDd::ONE;
    let mut sum = CDd::ZERO;
    let mut peak = 0.0f64;
    let mut quiet = 0;
    let mut k = 0usize;
    loop {
        let idx = 2 * k + 1;
        if idx > basis.k_max() {
            return Err(Error::SeriesTruncation {
                lambda: lambda_for_error(lambda),
                k_max: basis.k_max(),
            });
        }
        if k > 0 {
            coeff = (coeff * lam).scale(Dd::ONE / Dd::from((idx * (idx - 1)) as f64));
        }
        sum += coeff * ends[idx];
        let term_sup = coeff.abs_f64() * basis.phi_sup[idx];
        peak = peak.max(term_sup);
        if term_sup == 0.0 && k > 0 {
            break;
        }
        if term_sup < tol * peak {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        k += 1;
    }
    Ok((sum.to_c64(), k + 1))
}

/// The SPPS characteristic function `S(λ) = u2(1; λ)`.
pub fn spps_characteristic(basis: &PhiBasis, lambda: Complex64, tol: f64) -> Result<Complex64> {
    spps_characteristic_terms(basis, lambda, tol).map(|(v, _)| v)
}
