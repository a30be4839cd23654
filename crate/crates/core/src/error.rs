use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid needs an odd number of points >= 5, got {0}")]
    InvalidGrid(usize),

    #[error("sampled functions live on different grids ({left} vs {right} points)")]
    GridMismatch { left: usize, right: usize },

    #[error("non-finite sample at node {node}")]
    NonFinite { node: usize },

    #[error("division by a value of modulus {modulus:e} at node {node}")]
    DivisionBySmall { node: usize, modulus: f64 },

    #[error("Picard iteration did not converge after {iterations} sweeps (last update {update:e})")]
    PicardDivergence { iterations: usize, update: f64 },

    #[error("particular solution nearly vanishes (|f| = {modulus:e} at x = {x})")]
    VanishingSolution { x: f64, modulus: f64 },

    #[error("series did not reach tolerance within {k_max} basis functions at lambda = {lambda}")]
    SeriesTruncation { lambda: f64, k_max: usize },

    #[error("Bessel request out of range: order {order}, argument {x}")]
    BesselRange { order: usize, x: f64 },

    #[error("Chebyshev table order {0} exceeds the supported maximum of 60")]
    ChebyshevRange(usize),

    #[error("basis has {available} functions but {required} are needed")]
    BasisTooShort { required: usize, available: usize },

    #[error("whole-grid images were not computed")]
    MissingProfiles,

    #[error("potential is complex-valued (max |Im q| = {max_imag:e}); eigenvalue search needs real q")]
    ComplexPotential { max_imag: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("tabulated potential covers [{lo}, {hi}] but the interval is [{a}, {b}]")]
    TabulationCoverage { lo: f64, hi: f64, a: f64, b: f64 },

    #[error("potential file line {line}: {msg}")]
    PotentialFile { line: usize, msg: String },
}
