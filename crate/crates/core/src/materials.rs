//! Complex permittivity models and their time-domain discretization.
//!
//! The Drude pole is realized in the FDTD engine through a polarization
//! current `J` obeying `dJ/dt + γ J = ε0 ω_p² E`, discretized
//! semi-implicitly (trapezoidal in both `J` and `E`):
//!
//! ```text
//! J^{n+1} = α J^n + β (E^{n+1} + E^n)
//! α = (1 - γΔt/2) / (1 + γΔt/2)
//! β = ε0 ω_p² Δt / (2 (1 + γΔt/2))
//! ```
//!
//! The E update sees `(J^{n+1} + J^n)/2 = κ J^n + β/2 (E^{n+1} + E^n)`
//! with `κ = (1 + α)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::units::{ev_to_omega, Frequency, EPS0};
use crate::{Error, Result};

/// Single-pole Drude metal, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeModel {
    /// High-frequency permittivity ε_r.
    pub eps_inf: f64,
    /// ħω_p in eV.
    pub plasma_ev: f64,
    /// ħγ in eV.
    pub damping_ev: f64,
}

impl DrudeModel {
    /// Silver-like parameters used throughout the reproduction:
    /// ε_r = 6, ħω_p = 7.89 eV, ħγ = 51 meV.
    pub const SILVER: DrudeModel = DrudeModel {
        eps_inf: 6.0,
        plasma_ev: 7.89,
        damping_ev: 0.051,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_inf.is_finite() && self.eps_inf >= 1.0) {
            return Err(Error::Precondition(format!(
                "Drude eps_inf must be >= 1, got {}",
                self.eps_inf
            )));
        }
        if !(self.plasma_ev.is_finite() && self.plasma_ev >= 0.0) {
            return Err(Error::Precondition(format!(
                "Drude plasma energy must be >= 0, got {}",
                self.plasma_ev
            )));
        }
        if !(self.damping_ev.is_finite() && self.damping_ev >= 0.0) {
            return Err(Error::Precondition(format!(
                "Drude damping energy must be >= 0, got {}",
                self.damping_ev
            )));
        }
        Ok(())
    }

    pub fn permittivity(&self, e: Frequency) -> Result<Complex64> {
        check_energy(e)?;
        let w = e.ev();
        let denom = Complex64::new(w * w, self.damping_ev * w);
        Ok(Complex64::new(self.eps_inf, 0.0) - self.plasma_ev * self.plasma_ev / denom)
    }

    /// Energy of the `Re ε = target` crossing, `ω² = ω_p²/(ε_r - target) - γ²`.
    /// `None` when no positive root exists.
    pub fn re_eps_root_ev(&self, target: f64) -> Option<f64> {
        let gap = self.eps_inf - target;
        if gap <= 0.0 {
            return None;
        }
        let w2 = self.plasma_ev * self.plasma_ev / gap - self.damping_ev * self.damping_ev;
        (w2 > 0.0).then(|| w2.sqrt())
    }

    /// Same crossing with the damping neglected.
    pub fn lossless_root_ev(&self, target: f64) -> Option<f64> {
        let gap = self.eps_inf - target;
        (gap > 0.0).then(|| self.plasma_ev / gap.sqrt())
    }
}

/// Material filling a region. Permeability is 1 everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Medium {
    Vacuum,
    Dielectric { eps: f64 },
    Drude(DrudeModel),
}

impl Default for Medium {
    fn default() -> Self {
        Medium::Vacuum
    }
}

impl Medium {
    pub fn silver() -> Self {
        Medium::Drude(DrudeModel::SILVER)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Medium::Vacuum => Ok(()),
            Medium::Dielectric { eps } if eps.is_finite() && *eps > 0.0 => Ok(()),
            Medium::Dielectric { eps } => Err(Error::Precondition(format!(
                "dielectric permittivity must be > 0, got {eps}"
            ))),
            Medium::Drude(d) => d.validate(),
        }
    }

    /// Relative permittivity at infinite frequency; what the FDTD E update
    /// uses as its instantaneous part.
    pub fn eps_instantaneous(&self) -> f64 {
        match self {
            Medium::Vacuum => 1.0,
            Medium::Dielectric { eps } => *eps,
            Medium::Drude(d) => d.eps_inf,
        }
    }

    pub fn drude(&self) -> Option<&DrudeModel> {
        match self {
            Medium::Drude(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_dispersive(&self) -> bool {
        matches!(self, Medium::Drude(d) if d.plasma_ev > 0.0)
    }

    /// Whether the medium has no absorption at all (every frequency).
    pub fn is_lossless(&self) -> bool {
        match self {
            Medium::Vacuum | Medium::Dielectric { .. } => true,
            Medium::Drude(d) => d.plasma_ev == 0.0 || d.damping_ev == 0.0,
        }
    }

    pub fn permeability(&self) -> f64 {
        1.0
    }
}

fn check_energy(e: Frequency) -> Result<()> {
    if e.ev().is_finite() && e.ev() > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "photon energy (eV)",
            value: e.ev(),
        })
    }
}

/// Relative permittivity ε(ω) under `exp(-iωt)`, so `Im ε ≥ 0`.
pub fn permittivity(m: &Medium, e: Frequency) -> Result<Complex64> {
    check_energy(e)?;
    Ok(match m {
        Medium::Vacuum => Complex64::new(1.0, 0.0),
        Medium::Dielectric { eps } => Complex64::new(*eps, 0.0),
        Medium::Drude(d) => d.permittivity(e)?,
    })
}

/// Principal square root of ε; `Im n ≥ 0`.
pub fn refractive_index(m: &Medium, e: Frequency) -> Result<Complex64> {
    Ok(principal_sqrt(permittivity(m, e)?))
}

/// Square root on the branch with non-negative imaginary part. For a
/// negative real argument this is `+i sqrt(|x|)`.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && z.im == 0.0 && z.re < 0.0) {
        -s
    } else {
        s
    }
}

/// Coefficients of the semi-implicit Drude current update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdeCoefficients {
    /// Decay factor of `J` per step.
    pub alpha: f64,
    /// Coupling of `E^{n+1} + E^n` into `J^{n+1}`, S/m.
    pub beta: f64,
    /// Weight of `J^n` in the time-averaged current seen by the E update.
    pub kappa: f64,
}

pub fn ade_coefficients(m: &DrudeModel, dt: f64) -> Result<AdeCoefficients> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain {
            what: "time step (s)",
            value: dt,
        });
    }
    let gamma = ev_rate(m.damping_ev);
    let wp = ev_rate(m.plasma_ev);
    let half = 0.5 * gamma * dt;
    let alpha = (1.0 - half) / (1.0 + half);
    let beta = EPS0 * wp * wp * dt / (2.0 * (1.0 + half));
    Ok(AdeCoefficients {
        alpha,
        beta,
        kappa: 0.5 * (1.0 + alpha),
    })
}

fn ev_rate(ev: f64) -> f64 {
    if ev == 0.0 {
        0.0
    } else {
        ev_to_omega(Frequency(ev)).expect("positive rate")
    }
}

/// Effective permittivity of the discretized update at angular frequency
/// `omega`, obtained from the harmonic steady state of the Yee E update
/// together with the `J` recursion. The instantaneous term is referenced to
/// the discrete time derivative `ω̃ = (2/Δt) sin(ωΔt/2)`.
pub fn discrete_permittivity(m: &DrudeModel, dt: f64, omega: f64) -> Result<Complex64> {
    let c = ade_coefficients(m, dt)?;
    let z = Complex64::from_polar(1.0, -omega * dt);
    let omega_t = 2.0 * (0.5 * omega * dt).sin() / dt;
    let j_over_e = c.beta * (1.0 + z) / (z - c.alpha);
    let i = Complex64::new(0.0, 1.0);
    Ok(m.eps_inf + i * (0.5 * omega * dt).cos() * j_over_e / (omega_t * EPS0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn silver() -> DrudeModel {
        DrudeModel::SILVER
    }

    #[test]
    fn re_eps_zero_crossing() {
        let root = silver().re_eps_root_ev(0.0).unwrap();
        assert!((root - 3.2205).abs() < 5e-4, "{root}");
        let eps = silver().permittivity(Frequency(root)).unwrap();
        assert!(eps.re.abs() < 1e-12, "{eps}");
        // Known from the plasmon peak position.
        assert!((root - 3.23).abs() < 0.03);
    }

    #[test]
    fn lossless_frohlich_point_is_minus_two() {
        let d = DrudeModel {
            damping_ev: 0.0,
            ..silver()
        };
        let w = d.plasma_ev / (d.eps_inf + 2.0).sqrt();
        let eps = d.permittivity(Frequency(w)).unwrap();
        assert!((eps - Complex64::new(-2.0, 0.0)).norm() < 1e-12, "{eps}");
        assert!((d.lossless_root_ev(-2.0).unwrap() - 2.7895).abs() < 1e-3);
    }

    #[test]
    fn high_frequency_limit() {
        let eps = silver().permittivity(Frequency(100.0)).unwrap();
        assert!((eps - Complex64::new(6.0, 0.0)).norm() < 1e-2, "{eps}");
    }

    #[test]
    fn permittivity_rejects_non_positive_energy() {
        assert!(permittivity(&Medium::Vacuum, Frequency(0.0)).is_err());
        assert!(permittivity(&Medium::silver(), Frequency(-2.0)).is_err());
    }

    #[test]
    fn refractive_index_branch() {
        let e = Frequency(2.0);
        let n = refractive_index(&Medium::Dielectric { eps: 4.0 }, e).unwrap();
        assert!((n - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(principal_sqrt(Complex64::new(-1.0, 0.0)), Complex64::new(0.0, 1.0));
        let m = Medium::silver();
        let n = refractive_index(&m, Frequency(2.5)).unwrap();
        let eps = permittivity(&m, Frequency(2.5)).unwrap();
        assert!((n * n - eps).norm() < 1e-12 * eps.norm());
        assert!(n.im >= 0.0);
    }

    #[test]
    fn medium_validation() {
        assert!(Medium::Dielectric { eps: -1.0 }.validate().is_err());
        let bad = DrudeModel {
            eps_inf: 0.5,
            ..silver()
        };
        assert!(Medium::Drude(bad).validate().is_err());
        assert!(Medium::silver().validate().is_ok());
    }

    #[test]
    fn ade_limits() {
        let no_plasma = DrudeModel {
            plasma_ev: 0.0,
            ..silver()
        };
        let c = ade_coefficients(&no_plasma, 1e-18).unwrap();
        assert_eq!(c.beta, 0.0);
        let undamped = DrudeModel {
            damping_ev: 0.0,
            ..silver()
        };
        let c = ade_coefficients(&undamped, 1e-18).unwrap();
        assert_eq!(c.alpha.abs(), 1.0);
        assert!(ade_coefficients(&silver(), 0.0).is_err());
        assert!(ade_coefficients(&silver(), -1.0).is_err());
    }

    #[test]
    fn zero_plasma_current_stays_zero() {
        let d = DrudeModel {
            plasma_ev: 0.0,
            ..silver()
        };
        let c = ade_coefficients(&d, 2e-18).unwrap();
        let mut j = 0.0;
        let mut e_old = 0.0;
        for n in 0..1000 {
            let e_new = (n as f64 * 0.1).sin();
            j = c.alpha * j + c.beta * (e_new + e_old);
            e_old = e_new;
        }
        assert_eq!(j, 0.0);
    }

    #[test]
    fn discrete_dispersion_matches_at_three_ev() {
        let w = ev_to_omega(Frequency(3.0)).unwrap();
        let exact = silver().permittivity(Frequency(3.0)).unwrap();
        let disc = discrete_permittivity(&silver(), 2e-18, w).unwrap();
        assert!((disc - exact).norm() / exact.norm() <= 5e-3, "{disc} vs {exact}");
    }

    #[test]
    fn discrete_dispersion_is_second_order() {
        let w = ev_to_omega(Frequency(3.0)).unwrap();
        let exact = silver().permittivity(Frequency(3.0)).unwrap();
        let err = |dt: f64| (discrete_permittivity(&silver(), dt, w).unwrap() - exact).norm();
        let dt = 2e-17;
        let (e1, e2, e4) = (err(dt), err(dt / 2.0), err(dt / 4.0));
        let p1 = (e1 / e2).log2();
        let p2 = (e2 / e4).log2();
        assert!(p1 >= 1.95 && p2 >= 1.95, "orders {p1} {p2}");
    }

    proptest! {
        #[test]
        fn drude_is_passive(
            e in 0.05f64..20.0,
            eps_inf in 1.0f64..12.0,
            wp in 0.0f64..15.0,
            g in 0.0f64..1.0,
        ) {
            let d = DrudeModel { eps_inf, plasma_ev: wp, damping_ev: g };
            prop_assert!(d.permittivity(Frequency(e)).unwrap().im >= 0.0);
        }

        #[test]
        fn discrete_drude_is_passive(e in 0.5f64..6.0, dt in 1e-19f64..5e-18) {
            let w = ev_to_omega(Frequency(e)).unwrap();
            let eps = discrete_permittivity(&DrudeModel::SILVER, dt, w).unwrap();
            prop_assert!(eps.im >= 0.0);
        }
    }
}
