//! Dirichlet eigenvalues of `-u'' + q(x) u = λ u` from transmuted
//! Chebyshev expansions and spectral parameter power series.
//!
//! The pipeline, bottom up:
//!
//! * [`quadrature`]: uniform grids and cumulative Simpson integration.
//! * [`spps`]: a non-vanishing particular solution, the recursive integrals
//!   `φ_k`, and power series solutions in the spectral parameter.
//! * [`specfun`]: Bessel functions `J_n`.
//! * [`transmute`]: images of Chebyshev polynomials under the
//!   transmutation operator and the characteristic function `Φ(β)`.
//! * [`solver`]: interval scaling, root scanning and a finite-difference
//!   check.
//!
//! ```
//! use std::f64::consts::PI;
//! use sturm_transmute::solver::{find_eigenvalues_spps, normalize, PotentialSource, ProblemSpec};
//!
//! let spec = ProblemSpec {
//!     n_points: 2001,
//!     beta_max: 8.0,
//!     ..ProblemSpec::new(PotentialSource::Constant(1.0), 0.0, 1.0)
//! };
//! let spectrum = find_eigenvalues_spps(&normalize(&spec)?, &spec)?;
//! assert!((spectrum.records[0].lambda - (1.0 + PI * PI)).abs() < 1e-8);
//! # Ok::<(), sturm_transmute::Error>(())
//! ```

pub mod dd;
pub mod error;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod spps;
pub mod transmute;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/problems.md")]
    mod problems {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/spps.md")]
    mod spps {}
    #[doc = include_str!("../../../book/src/bessel.md")]
    mod bessel {}
    #[doc = include_str!("../../../book/src/transmutation.md")]
    mod transmutation {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
