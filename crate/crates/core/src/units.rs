//! Physical constants and the eV / nm <-> SI conversions.
//!
//! Everything inside the crate computes in SI. Configuration and output
//! files speak photon energy in eV and lengths in nm.
//!
//! Time convention: all complex amplitudes carry `exp(-i ω t)`. With this
//! choice passive media have `Im ε ≥ 0`, outgoing waves are `exp(+i k r)`
//! and the running Fourier transforms accumulate `exp(+i ω t)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact).
pub const Q_E: f64 = 1.602_176_634e-19;
/// Speed of light in vacuum, m/s (exact).
pub const C0: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m (CODATA 2018).
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability, H/m, kept consistent with `EPS0` and `C0`.
pub const MU0: f64 = 1.0 / (EPS0 * C0 * C0);
/// Vacuum wave impedance, ohm.
pub const ETA0: f64 = MU0 * C0;

/// Photon energy ħω in eV.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(pub f64);

impl Frequency {
    pub fn from_ev(energy_ev: f64) -> Result<Self> {
        check_positive("photon energy (eV)", energy_ev)?;
        Ok(Self(energy_ev))
    }

    /// Inverse of [`ev_to_omega`].
    pub fn from_omega(omega: f64) -> Result<Self> {
        check_positive("angular frequency", omega)?;
        Ok(Self(omega * HBAR / Q_E))
    }

    pub fn ev(self) -> f64 {
        self.0
    }

    pub fn omega(self) -> Result<f64> {
        ev_to_omega(self)
    }
}

/// A length in nm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Length(pub f64);

impl Length {
    pub fn from_nm(nanometers: f64) -> Result<Self> {
        check_positive("length (nm)", nanometers)?;
        Ok(Self(nanometers))
    }

    pub fn nm(self) -> f64 {
        self.0
    }

    pub fn meters(self) -> f64 {
        self.0 * 1e-9
    }
}

fn check_positive(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

/// ω = E q_e / ħ in rad/s.
pub fn ev_to_omega(e: Frequency) -> Result<f64> {
    check_positive("photon energy (eV)", e.0)?;
    Ok(e.0 * Q_E / HBAR)
}

/// Vacuum wavevector k0 = ω / c in 1/m.
pub fn vacuum_wavevector(e: Frequency) -> Result<f64> {
    Ok(ev_to_omega(e)? / C0)
}

/// Vacuum wavelength in nm for a photon energy.
pub fn wavelength_nm(e: Frequency) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI / vacuum_wavevector(e)? * 1e9)
}

/// Photon energy in eV of a vacuum wavelength given in nm.
pub fn ev_from_wavelength_nm(lambda_nm: f64) -> Result<Frequency> {
    check_positive("wavelength (nm)", lambda_nm)?;
    Frequency::from_omega(2.0 * std::f64::consts::PI * C0 / (lambda_nm * 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_ev_in_rad_per_second() {
        let w = ev_to_omega(Frequency(1.0)).unwrap();
        assert!((w / 1.519_267e15 - 1.0).abs() < 1e-6, "{w}");
    }

    #[test]
    fn non_positive_energies_are_rejected() {
        assert!(ev_to_omega(Frequency(0.0)).is_err());
        assert!(ev_to_omega(Frequency(-1.0)).is_err());
        assert!(vacuum_wavevector(Frequency(0.0)).is_err());
        assert!(Frequency::from_ev(f64::NAN).is_err());
        assert!(Length::from_nm(0.0).is_err());
    }

    #[test]
    fn linear_in_energy() {
        let one = ev_to_omega(Frequency(1.0)).unwrap();
        let w = ev_to_omega(Frequency(3.23)).unwrap();
        assert!((w - 3.23 * one).abs() <= 1e-15 * w);
        let k1 = vacuum_wavevector(Frequency(1.2)).unwrap();
        let k2 = vacuum_wavevector(Frequency(2.4)).unwrap();
        assert!((k2 - 2.0 * k1).abs() <= 1e-15 * k2);
    }

    #[test]
    fn wavevector_at_500_nm() {
        // 2.4797 eV is λ ≈ 500 nm, so k0 ≈ 2π / 500 nm.
        let k0 = vacuum_wavevector(Frequency(2.4797)).unwrap();
        assert!((k0 / 1.256_637e7 - 1.0).abs() < 2e-5, "{k0}");
        let e = ev_from_wavelength_nm(500.0).unwrap();
        let k0 = vacuum_wavevector(e).unwrap();
        assert!((k0 - 2.0 * std::f64::consts::PI / 500e-9).abs() < 1e-12 * k0);
    }

    proptest! {
        #[test]
        fn ev_omega_round_trip(e in 1e-3f64..1e3) {
            let w = ev_to_omega(Frequency(e)).unwrap();
            let back = Frequency::from_omega(w).unwrap().ev();
            prop_assert!((back - e).abs() <= 1e-12 * e);
        }
    }
}
