//! Regularized photon Green function, projected LDOS and Purcell factor in
//! and near lossy dispersive nanostructures.
//!
//! The crate couples a Yee-grid FDTD engine (Drude ADE media, CPML
//! boundaries, soft dipole source, running DFT monitors) to a set of
//! analytic references:
//!
//! * the homogeneous-medium Green function and its average over a cubic
//!   cell ([`analytic::homogeneous`]),
//! * the scattered dyadic Green function of concentric spherical layers
//!   ([`analytic::sphere`]), which also yields the real-cavity (local
//!   field) Green function at the center of a small lossless cavity.
//!
//! [`green::extract_gf`] turns an FDTD self-field record into a
//! [`analytic::GreenSample`] so both routes produce the same quantity.
//! The `ldos-kit` binary wraps scenario files, sweeps and CSV output.
//!
//! Units: SI internally, eV and nm at the edges ([`units`]).

pub mod analytic;
pub mod compare;
pub mod fdtd;
pub mod green;
pub mod materials;
pub mod output;
pub mod scenario;
pub mod sweep;
pub mod units;
pub mod validate;

pub use analytic::GreenSample;
pub use materials::{DrudeModel, Medium};
pub use scenario::ScenarioConfig;

pub use units::{Frequency, Length};

/// Version string written into every CSV header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} must be positive and finite, got {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("homogeneous Green function diverges at coincidence in a lossy medium (n = {n_re} + {n_im}i); use the cube-averaged form")]
    DivergentAtCoincidence { n_re: f64, n_im: f64 },
    #[error("quadrature did not converge: achieved relative change {achieved:.3e}")]
    Quadrature { achieved: f64 },
    #[error("spherical Bessel evaluation overflows at l = {l}, |x| = {x_abs:.3e}")]
    BesselOverflow { l: usize, x_abs: f64 },
    #[error("singular interface matching at l = {l}, {energy_ev} eV")]
    SingularMatching { l: usize, energy_ev: f64 },
    #[error("multipole series not converged at l_max = {l_max} (last relative term {tail:.3e})")]
    SeriesNotConverged { l_max: usize, tail: f64 },
    #[error("invalid sphere stack: {0}")]
    InvalidStack(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("non-finite field detected at step {step}")]
    Unstable { step: usize },
    #[error("source spectrum below floor at {energy_ev} eV")]
    SpectralFloor { energy_ev: f64 },
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("mismatched frequency grids: {0}")]
    MismatchedGrids(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
