//! Dirichlet eigenvalue problems on a finite interval.
//!
//! A [`ProblemSpec`] describes `-u'' + q(x) u = λ u`, `u(a) = u(b) = 0`.
//! [`normalize`] maps it to `(0, 1)`; the finders scan a characteristic
//! function for sign changes and map the roots back.

mod fd;
mod potential;
mod reference;
mod roots;

use std::cell::Cell;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::UniformGrid;
use crate::spps::{build_phi_basis, spps_characteristic_terms, PhiBasis, Potential, DEFAULT_K_MAX, DEFAULT_SERIES_TOL};
use crate::transmute::{TransmutationChar, DEFAULT_TRUNCATION};

pub use fd::{fd_count_below, fd_eigenvalues, DEFAULT_MESH, MIN_MESH};
pub use potential::{MonotoneCubic, PotentialSource, TabulatedPotential};
pub use reference::{ReferenceRow, EXP_ON_ZERO_PI};
pub use roots::{scan_roots, Root, ScanOutcome};

pub const DEFAULT_BETA_MAX: f64 = 55.0;
pub const DEFAULT_SCAN_STEP: f64 = 0.25;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    DirichletDirichlet,
}

fn potential_as_str<S: Serializer>(p: &PotentialSource, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProblemSpec {
    #[serde(serialize_with = "potential_as_str")]
    pub potential: PotentialSource,
    pub interval: (f64, f64),
    pub boundary: Boundary,
    pub n_points: usize,
    /// Chebyshev truncation `N`: the sine expansion keeps `T_1 .. T_{2N+1}`.
    #[serde(rename = "N")]
    pub truncation: usize,
    pub k_max: usize,
    pub beta_max: f64,
    pub scan_step: f64,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec {
            potential: PotentialSource::Zero,
            interval: (0.0, 1.0),
            boundary: Boundary::DirichletDirichlet,
            n_points: crate::quadrature::DEFAULT_POINTS,
            truncation: DEFAULT_TRUNCATION,
            k_max: DEFAULT_K_MAX,
            beta_max: DEFAULT_BETA_MAX,
            scan_step: DEFAULT_SCAN_STEP,
        }
    }
}

impl ProblemSpec {
    pub fn new(potential: PotentialSource, a: f64, b: f64) -> Self {
        ProblemSpec {
            potential,
            interval: (a, b),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidProblem(format!("interval ({a}, {b}) must be finite with a < b")));
        }
        if !(self.beta_max.is_finite() && self.beta_max > 0.0) {
            return Err(Error::InvalidProblem(format!("beta_max must be positive, got {}", self.beta_max)));
        }
        if !(self.scan_step.is_finite() && self.scan_step > 0.0) {
            return Err(Error::InvalidProblem(format!("scan_step must be positive, got {}", self.scan_step)));
        }
        if self.truncation == 0 {
            return Err(Error::InvalidProblem("N must be at least 1".into()));
        }
        UniformGrid::new(self.n_points)?;
        Ok(())
    }
}

/// The problem mapped to `(0, 1)`: `q_unit(t) = L² q(a + L t)`, `L = b - a`.
#[derive(Clone, Debug)]
pub struct NormalizedProblem {
    source: PotentialSource,
    a: f64,
    length: f64,
    scale: f64,
    q_unit: Potential,
}

impl NormalizedProblem {
    /// `(b - a)²`; original eigenvalues are unit eigenvalues divided by it.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn q_unit(&self) -> &Potential {
        &self.q_unit
    }

    /// `q_unit` evaluated off-grid from the source.
    pub fn q_unit_at(&self, t: f64) -> Complex64 {
        self.source.eval(self.a + self.length * t) * self.scale
    }

    fn require_real(&self) -> Result<()> {
        if self.q_unit.is_real() {
            Ok(())
        } else {
            Err(Error::ComplexPotential {
                max_imag: self.q_unit.max_imag(),
            })
        }
    }
}

pub fn normalize(spec: &ProblemSpec) -> Result<NormalizedProblem> {
    spec.validate()?;
    let (a, b) = spec.interval;
    if let PotentialSource::Tabulated(t) = &spec.potential {
        let (lo, hi) = t.range();
        let slack = 1e-12 * (b - a);
        if lo > a + slack || hi < b - slack {
            return Err(Error::TabulationCoverage { lo, hi, a, b });
        }
    }
    let length = b - a;
    let scale = length * length;
    let grid = UniformGrid::new(spec.n_points)?;
    let source = spec.potential.clone();
    let q_unit = Potential::from_fn(grid, |t| source.eval(a + length * t) * scale)?;
    Ok(NormalizedProblem {
        source,
        a,
        length,
        scale,
        q_unit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Transmutation,
    Spps,
    FdOracle,
}

/// One eigenvalue. `beta` is the root in unit-interval variables, signed
/// so that `lambda = beta |beta| / (b - a)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub index: usize,
    pub beta: f64,
    pub lambda: f64,
    pub residual: f64,
    pub method: Method,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub max_im_residual: f64,
    pub terms_used: usize,
    pub wall_ms: f64,
    /// Original-variable eigenvalue parameter at which the SPPS series ran
    /// out of basis functions; the scan stops there.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncated_at_lambda: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub problem: ProblemSpec,
    pub method: Method,
    #[serde(rename = "eigenvalues")]
    pub records: Vec<EigenRecord>,
    pub diagnostics: Diagnostics,
}

impl Spectrum {
    pub fn lambdas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lambda).collect()
    }
}

/// Builds the particular solution and `K_max + 1` basis functions for the
/// normalized potential. Shared by both finders.
pub fn prepare_basis(norm: &NormalizedProblem, spec: &ProblemSpec) -> Result<PhiBasis> {
    norm.require_real()?;
    build_phi_basis(&norm.q_unit, spec.k_max)
}

// Unit eigenvalues below the transmutation scan's first sample are found by
// counting finite-difference eigenvalues there, so indices stay correct.
fn index_offset(norm: &NormalizedProblem, beta_start: f64) -> usize {
    let floor = PI * PI + norm.q_unit.min_real();
    let threshold = beta_start * beta_start;
    if floor >= threshold {
        return 0;
    }
    let q = |t: f64| norm.q_unit_at(t).re;
    fd_count_below(&q, threshold, DEFAULT_MESH)
}

/// Zeros of `Φ(β)` on `(scan_step / 2, beta_max]`, reported as
/// `λ = β² / (b - a)²`.
pub fn find_eigenvalues_transmutation(norm: &NormalizedProblem, spec: &ProblemSpec) -> Result<Spectrum> {
    let basis = prepare_basis(norm, spec)?;
    transmutation_spectrum(norm, spec, &basis)
}

pub fn transmutation_spectrum(norm: &NormalizedProblem, spec: &ProblemSpec, basis: &PhiBasis) -> Result<Spectrum> {
    let start = Instant::now();
    norm.require_real()?;
    let chr = TransmutationChar::from_basis(basis, spec.truncation, false)?;
    let beta_start = 0.5 * spec.scan_step;
    let outcome = scan_roots(|b| chr.phi_char(b), beta_start, spec.beta_max, spec.scan_step)?;
    if let Some(b) = outcome.stopped_at {
        // only Bessel range errors can end this scan
        return Err(chr.phi_char(b).unwrap_err());
    }
    let offset = index_offset(norm, beta_start);
    let records = outcome
        .roots
        .iter()
        .enumerate()
        .map(|(i, r)| EigenRecord {
            index: offset + i + 1,
            beta: r.x,
            lambda: r.x * r.x / norm.scale,
            residual: r.residual,
            method: Method::Transmutation,
        })
        .collect();
    Ok(Spectrum {
        problem: spec.clone(),
        method: Method::Transmutation,
        records,
        diagnostics: Diagnostics {
            max_im_residual: outcome.max_im_ratio,
            terms_used: spec.truncation + 1,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            truncated_at_lambda: None,
        },
    })
}

/// Zeros of `S(λ) = u2(1; λ)`. The scan variable is a signed `s` with
/// unit eigenvalue `s |s|`, so eigenvalues below zero are reached too; it
/// starts below the lower bound `π² + min q_unit` and stops at `beta_max`
/// or where the series first runs out of basis functions.
pub fn find_eigenvalues_spps(norm: &NormalizedProblem, spec: &ProblemSpec) -> Result<Spectrum> {
    let basis = prepare_basis(norm, spec)?;
    spps_spectrum(norm, spec, &basis)
}

pub fn spps_spectrum(norm: &NormalizedProblem, spec: &ProblemSpec, basis: &PhiBasis) -> Result<Spectrum> {
    let start = Instant::now();
    norm.require_real()?;
    let floor = PI * PI + norm.q_unit.min_real();
    let s_start = if floor >= 0.0 {
        0.0
    } else {
        -(-floor).sqrt() - spec.scan_step
    };
    let terms = Cell::new(0usize);
    let eval = |s: f64| {
        let (v, used) = spps_characteristic_terms(basis, Complex64::new(-s * s.abs(), 0.0), DEFAULT_SERIES_TOL)?;
        terms.set(terms.get().max(used));
        Ok(v)
    };
    let outcome = scan_roots(eval, s_start, spec.beta_max, spec.scan_step)?;
    let records = outcome
        .roots
        .iter()
        .enumerate()
        .map(|(i, r)| EigenRecord {
            index: i + 1,
            beta: r.x,
            lambda: r.x * r.x.abs() / norm.scale,
            residual: r.residual,
            method: Method::Spps,
        })
        .collect();
    Ok(Spectrum {
        problem: spec.clone(),
        method: Method::Spps,
        records,
        diagnostics: Diagnostics {
            max_im_residual: outcome.max_im_ratio,
            terms_used: terms.get(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            truncated_at_lambda: outcome.stopped_at.map(|s| s * s.abs() / norm.scale),
        },
    })
}

/// First `n_eigs` finite-difference eigenvalues in original variables.
pub fn fd_oracle(norm: &NormalizedProblem, n_eigs: usize, mesh: usize) -> Result<Vec<f64>> {
    norm.require_real()?;
    let q = |t: f64| norm.q_unit_at(t).re;
    Ok(fd_eigenvalues(&q, n_eigs, mesh)?
        .into_iter()
        .map(|(l, _)| l / norm.scale)
        .collect())
}

/// Finite-difference eigenvalues with `λ_unit <= beta_max²` as a spectrum.
/// `residual` holds the Richardson correction size, in original units.
pub fn fd_spectrum(norm: &NormalizedProblem, spec: &ProblemSpec, mesh: usize) -> Result<Spectrum> {
    let start = Instant::now();
    norm.require_real()?;
    let q = |t: f64| norm.q_unit_at(t).re;
    let top = spec.beta_max * spec.beta_max;
    let count = fd_count_below(&q, top, mesh);
    let records = fd_eigenvalues(&q, count, mesh)?
        .into_iter()
        .enumerate()
        .map(|(i, (l, corr))| EigenRecord {
            index: i + 1,
            beta: l.signum() * l.abs().sqrt(),
            lambda: l / norm.scale,
            residual: corr / norm.scale,
            method: Method::FdOracle,
        })
        .collect();
    Ok(Spectrum {
        problem: spec.clone(),
        method: Method::FdOracle,
        records,
        diagnostics: Diagnostics {
            max_im_residual: 0.0,
            terms_used: 0,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            truncated_at_lambda: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: PotentialSource, a: f64, b: f64, n_points: usize, beta_max: f64) -> ProblemSpec {
        ProblemSpec {
            n_points,
            beta_max,
            ..ProblemSpec::new(p, a, b)
        }
    }

    #[test]
    fn normalize_exp_on_zero_pi() {
        let s = spec(PotentialSource::Exp, 0.0, PI, 1001, 10.0);
        let n = normalize(&s).unwrap();
        assert!((n.scale() - PI * PI).abs() < 1e-15);
        let q = n.q_unit().samples();
        for i in [0, 250, 1000] {
            let t = q.grid().node(i);
            let want = PI * PI * (PI * t).exp();
            assert!((q.at(i).re - want).abs() < 1e-13 * want);
        }
    }

    #[test]
    fn normalize_constant() {
        let n = normalize(&spec(PotentialSource::Constant(5.0), 0.0, 2.0, 101, 10.0)).unwrap();
        assert_eq!(n.scale(), 4.0);
        assert!(n.q_unit().samples().values().iter().all(|v| *v == Complex64::new(20.0, 0.0)));
        let n = normalize(&spec(PotentialSource::Zero, 0.0, 1.0, 101, 10.0)).unwrap();
        assert_eq!(n.scale(), 1.0);
        assert_eq!(n.q_unit().samples().sup_norm(), 0.0);
    }

    #[test]
    fn normalize_rejects_bad_specs() {
        for s in [
            spec(PotentialSource::Zero, 1.0, 1.0, 101, 10.0),
            spec(PotentialSource::Zero, 0.0, f64::INFINITY, 101, 10.0),
            spec(PotentialSource::Zero, 0.0, 1.0, 100, 10.0),
            spec(PotentialSource::Zero, 0.0, 1.0, 101, 0.0),
            ProblemSpec {
                scan_step: -1.0,
                ..ProblemSpec::default()
            },
            ProblemSpec {
                truncation: 0,
                ..ProblemSpec::default()
            },
        ] {
            assert!(normalize(&s).is_err(), "{s:?}");
        }
        let t = TabulatedPotential::from_csv("t", "0,1\n0.5,1\n").unwrap();
        let e = normalize(&spec(PotentialSource::Tabulated(t), 0.0, 1.0, 101, 10.0)).unwrap_err();
        assert!(matches!(e, Error::TabulationCoverage { .. }));
        let e = normalize(&spec(PotentialSource::Exp, 0.0, 800.0, 101, 10.0)).unwrap_err();
        assert!(matches!(e, Error::NonFinite { .. }));
    }

    #[test]
    fn free_problem_transmutation() {
        let s = spec(PotentialSource::Zero, 0.0, 1.0, 4001, 16.0);
        let sp = find_eigenvalues_transmutation(&normalize(&s).unwrap(), &s).unwrap();
        assert_eq!(sp.records.len(), 5);
        for r in &sp.records {
            let exact = (r.index as f64 * PI).powi(2);
            assert!(((r.lambda - exact) / exact).abs() < 1e-9, "{r:?}");
            assert!(r.residual < 1e-9);
        }
        assert_eq!(sp.diagnostics.terms_used, 19);
    }

    #[test]
    fn scaled_interval() {
        // q = 0 on (0, 2): λ_n = n²π²/4
        let s = spec(PotentialSource::Zero, 0.0, 2.0, 4001, 10.0);
        let sp = find_eigenvalues_spps(&normalize(&s).unwrap(), &s).unwrap();
        assert_eq!(sp.records.len(), 3);
        for r in &sp.records {
            let exact = (r.index as f64 * PI).powi(2) / 4.0;
            assert!(((r.lambda - exact) / exact).abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn spps_reaches_negative_eigenvalues() {
        // q = -30 on (0, 1): λ_n = n²π² - 30, so λ_1 < 0
        let s = spec(PotentialSource::Constant(-30.0), 0.0, 1.0, 4001, 10.0);
        let norm = normalize(&s).unwrap();
        let sp = find_eigenvalues_spps(&norm, &s).unwrap();
        let exact1 = PI * PI - 30.0;
        assert!(sp.records[0].lambda < 0.0 && sp.records[0].beta < 0.0);
        assert!((sp.records[0].lambda - exact1).abs() < 1e-8);
        // transmutation cannot see λ_1 but keeps the index right
        let tr = find_eigenvalues_transmutation(&norm, &s).unwrap();
        assert_eq!(tr.records[0].index, 2);
        assert!((tr.records[0].lambda - (4.0 * PI * PI - 30.0)).abs() < 1e-8);
    }

    #[test]
    fn spps_reports_truncation() {
        let s = ProblemSpec {
            k_max: 40,
            ..spec(PotentialSource::Zero, 0.0, 1.0, 2001, 40.0)
        };
        let sp = find_eigenvalues_spps(&normalize(&s).unwrap(), &s).unwrap();
        let cut = sp.diagnostics.truncated_at_lambda.expect("series must run out");
        assert!(cut > 0.0 && cut < 1600.0);
        assert!(sp.records.iter().all(|r| r.lambda < cut));
    }

    #[test]
    fn complex_potential_is_rejected() {
        let t = TabulatedPotential::from_csv("t", "0,1,1\n1,1,1\n").unwrap();
        let s = spec(PotentialSource::Tabulated(t), 0.0, 1.0, 101, 10.0);
        let n = normalize(&s).unwrap();
        assert!(matches!(find_eigenvalues_spps(&n, &s), Err(Error::ComplexPotential { .. })));
        assert!(matches!(fd_oracle(&n, 2, 300), Err(Error::ComplexPotential { .. })));
    }

    #[test]
    fn truncation_must_fit_basis() {
        let s = ProblemSpec {
            k_max: 20,
            ..spec(PotentialSource::Zero, 0.0, 1.0, 1001, 10.0)
        };
        let e = find_eigenvalues_transmutation(&normalize(&s).unwrap(), &s).unwrap_err();
        assert!(matches!(e, Error::BasisTooShort { .. }));
    }

    #[test]
    fn oracle_examples() {
        let s = spec(PotentialSource::Zero, 0.0, 1.0, 101, 10.0);
        let l = fd_oracle(&normalize(&s).unwrap(), 1, DEFAULT_MESH).unwrap();
        assert!((l[0] - PI * PI).abs() < 1e-6);
        let s = spec(PotentialSource::Constant(1.0), 0.0, 1.0, 101, 10.0);
        let l = fd_oracle(&normalize(&s).unwrap(), 1, DEFAULT_MESH).unwrap();
        assert!((l[0] - 1.0 - PI * PI).abs() < 1e-6);
        let s = spec(PotentialSource::Exp, 0.0, PI, 101, 10.0);
        let l = fd_oracle(&normalize(&s).unwrap(), 1, DEFAULT_MESH).unwrap();
        assert!((l[0] - 4.8966693800).abs() < 1e-5 * 4.8966693800);
    }

    #[test]
    fn oracle_spectrum_covers_scan_range() {
        let s = spec(PotentialSource::Zero, 0.0, 1.0, 101, 16.0);
        let sp = fd_spectrum(&normalize(&s).unwrap(), &s, DEFAULT_MESH).unwrap();
        assert_eq!(sp.records.len(), 5);
        assert!(sp.records.iter().all(|r| r.method == Method::FdOracle));
    }

    #[test]
    fn json_shape() {
        let s = spec(PotentialSource::Polynomial(vec![1.0, 0.0, 1.0]), 0.0, 1.0, 101, 5.0);
        let sp = fd_spectrum(&normalize(&s).unwrap(), &s, 300).unwrap();
        let v = serde_json::to_value(&sp).unwrap();
        assert_eq!(v["problem"]["potential"], "poly:1,0,1");
        assert_eq!(v["problem"]["N"], 18);
        assert_eq!(v["method"], "fd_oracle");
        assert_eq!(v["eigenvalues"][0]["index"], 1);
        assert!(v["diagnostics"].get("truncated_at_lambda").is_none());
    }
}
