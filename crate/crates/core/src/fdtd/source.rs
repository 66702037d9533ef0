//! Soft dipole source: a current density on one E edge.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Axis;
use crate::units::{Frequency, HBAR, Q_E};
use crate::{Error, Result};

/// Requested frequencies must carry at least this fraction of the peak
/// source spectrum.
pub const SPECTRAL_FLOOR: f64 = 1e-4;

/// Gaussian-modulated sinusoid
/// `J(t) = A exp(-(t - t0)²/2τ²) sin(ω_c (t - t0))`, `τ = ħ / σ`.
///
/// `t0` is placed on a current sample, so the sampled pulse is odd about
/// it and its sum (the injected charge) is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Waveform {
    pub center_ev: f64,
    /// Spectral standard deviation σ in eV.
    pub sigma_ev: f64,
    /// Delay `t0` in units of τ.
    pub delay_sigmas: f64,
    /// Peak current density, A/m².
    pub amplitude: f64,
}

impl Default for Waveform {
    fn default() -> Self {
        Self {
            center_ev: 2.85,
            sigma_ev: 0.33,
            delay_sigmas: 7.0,
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub component: Axis,
    /// Displacement of the source edge along z from the domain center.
    pub offset_cells: i64,
    #[serde(default)]
    pub waveform: Waveform,
}

/// Waveform bound to a time step.
#[derive(Debug, Clone, Copy)]
pub struct SampledPulse {
    w: Waveform,
    dt: f64,
    tau: f64,
    omega_c: f64,
    /// Index of the (zero) center sample.
    n0: usize,
}

impl Waveform {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("source center energy (eV)", self.center_ev),
            ("source bandwidth (eV)", self.sigma_ev),
            ("source delay (tau)", self.delay_sigmas),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain { what, value: v });
            }
        }
        if !self.amplitude.is_finite() || self.amplitude == 0.0 {
            return Err(Error::Domain {
                what: "source amplitude",
                value: self.amplitude,
            });
        }
        Ok(())
    }

    pub fn sampled(&self, dt: f64) -> Result<SampledPulse> {
        self.validate()?;
        let tau = HBAR / (self.sigma_ev * Q_E);
        Ok(SampledPulse {
            w: *self,
            dt,
            tau,
            omega_c: self.center_ev * Q_E / HBAR,
            n0: (self.delay_sigmas * tau / dt).round() as usize,
        })
    }
}

impl SampledPulse {
    /// Current density at `(n + ½)Δt`; identically zero after `2 n0`.
    pub fn current(&self, n: usize) -> f64 {
        if n > 2 * self.n0 {
            return 0.0;
        }
        let s = (n as f64 - self.n0 as f64) * self.dt;
        let u = s / self.tau;
        self.w.amplitude * (-0.5 * u * u).exp() * (self.omega_c * s).sin()
    }

    /// Last step with a non-zero current.
    pub fn last_step(&self) -> usize {
        2 * self.n0
    }

    /// `Σ_n J((n+½)Δt) exp(iω(n+½)Δt) Δt`.
    pub fn spectrum(&self, omega: f64) -> Complex64 {
        (0..=self.last_step())
            .map(|n| {
                let t = (n as f64 + 0.5) * self.dt;
                Complex64::from_polar(self.current(n) * self.dt, omega * t)
            })
            .sum()
    }

    /// Errors with [`Error::SpectralFloor`] if any requested frequency
    /// falls below [`SPECTRAL_FLOOR`] of the spectrum at the center.
    pub fn check_band(&self, freqs: &[Frequency]) -> Result<()> {
        let peak = self.spectrum(self.omega_c).norm();
        for &f in freqs {
            let s = self.spectrum(f.ev() * Q_E / HBAR).norm();
            if s < SPECTRAL_FLOOR * peak {
                return Err(Error::SpectralFloor { energy_ev: f.ev() });
            }
        }
        Ok(())
    }
}
