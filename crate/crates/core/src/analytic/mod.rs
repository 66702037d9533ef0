//! Closed-form and series reference Green functions.
//!
//! Convention: the field of a polarization density `P` is
//! `E(r) = (1/ε0) ∫ G(r, r') P(r') d³r'`, so `G` has units of m⁻³ and in a
//! lossless medium `Im G_ii(r, r) = k0³ n / 6π`. With `k = k0 n`,
//!
//! ```text
//! G(R) = (k0² I + ∇∇/ε) exp(ikR)/(4πR) - I δ(R) / (3ε)
//! ```
//!
//! where the `∇∇` term is a principal value with spherical exclusion.

pub mod bessel;
pub mod homogeneous;
pub mod sphere;

use num_complex::Complex64;

use crate::units::{vacuum_wavevector, Frequency};
use crate::Result;

pub use homogeneous::{cube_averaged_gf, hom_gf_im};
pub use sphere::{
    real_cavity_gf_center, scattered_gf, scattered_gf_series, scattered_gf_term,
    stack_coefficients, total_ldos_outside, Orientation, SeriesPolicy, SeriesResult, SphereStack,
};

/// `Im G_ii` of vacuum at coincidence, `k0³/6π`, in m⁻³.
pub fn vacuum_im_g(e: Frequency) -> Result<f64> {
    let k0 = vacuum_wavevector(e)?;
    Ok(k0 * k0 * k0 / (6.0 * std::f64::consts::PI))
}

/// One frequency point of an equal-argument Green function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSample {
    pub energy_ev: f64,
    /// `G_ii(r, r; ω)` in m⁻³.
    pub g: Complex64,
    /// Projected LDOS `Im G_ii / Im G_ii^vac`.
    pub ldos_rel: f64,
    /// Equal to `ldos_rel` under the vacuum normalization.
    pub purcell: f64,
}

impl GreenSample {
    pub fn new(e: Frequency, g: Complex64) -> Result<Self> {
        let rho = g.im / vacuum_im_g(e)?;
        Ok(Self {
            energy_ev: e.ev(),
            g,
            ldos_rel: rho,
            purcell: rho,
        })
    }
}
