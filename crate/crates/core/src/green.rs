//! Self-field records → regularized Green function, LDOS, Purcell factor.
//!
//! A current density `J` on one edge of volume `Δ³` is a dipole with
//! `dp/dt = J Δ³`, so under `exp(-iωt)` `p(ω) = i J(ω) Δ³ / ω`, and
//!
//! ```text
//! G_ii(r0, r0; ω) = ε0 E_i(r0; ω) / p(ω)
//! ```
//!
//! The `Δ³` makes the grid dependence of `G` explicit: it is the Green
//! function of a cell-sized dipole, comparable with the cube-averaged
//! analytic form.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::GreenSample;
use crate::fdtd::source::SPECTRAL_FLOOR;
use crate::fdtd::{Axis, RunRecord};
use crate::units::{Frequency, Length, EPS0};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionRecord {
    pub energy_ev: f64,
    pub e_src: Complex64,
    pub j_src: Complex64,
    pub delta: Length,
    pub component: Axis,
}

pub fn extract_gf(rec: &ExtractionRecord) -> Result<GreenSample> {
    let e = Frequency::from_ev(rec.energy_ev)?;
    let omega = e.omega()?;
    let j = rec.j_src;
    if !(j.norm() > 0.0 && j.norm().is_finite()) {
        return Err(Error::SpectralFloor {
            energy_ev: rec.energy_ev,
        });
    }
    let d = rec.delta.meters();
    let p = Complex64::new(0.0, 1.0) * j * d * d * d / omega;
    GreenSample::new(e, EPS0 * rec.e_src / p)
}

/// One record per frequency of a run.
pub fn records(run: &RunRecord) -> Vec<ExtractionRecord> {
    run.frequencies
        .iter()
        .zip(run.e_src.iter().zip(&run.j_src))
        .map(|(f, (&e, &j))| ExtractionRecord {
            energy_ev: f.ev(),
            e_src: e,
            j_src: j,
            delta: Length(run.delta_nm),
            component: run.component,
        })
        .collect()
}

/// Extracts every frequency of a run; a current spectrum below
/// [`SPECTRAL_FLOOR`] of its in-band maximum is an error.
pub fn extract_run(run: &RunRecord) -> Result<Vec<GreenSample>> {
    let recs = records(run);
    let j_max = recs.iter().map(|r| r.j_src.norm()).fold(0.0, f64::max);
    recs.iter()
        .map(|r| {
            if r.j_src.norm() < SPECTRAL_FLOOR * j_max {
                return Err(Error::SpectralFloor {
                    energy_ev: r.energy_ev,
                });
            }
            extract_gf(r)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurcellSpectrum {
    /// `(energy_ev, purcell)`, ascending in energy.
    pub points: Vec<(f64, f64)>,
    pub peak_ev: f64,
    pub peak_purcell: f64,
}

impl PurcellSpectrum {
    /// Purcell factor at the sample nearest to `energy_ev`.
    pub fn at(&self, energy_ev: f64) -> f64 {
        self.points
            .iter()
            .min_by(|a, b| (a.0 - energy_ev).abs().total_cmp(&(b.0 - energy_ev).abs()))
            .map(|p| p.1)
            .unwrap_or(f64::NAN)
    }
}

pub fn purcell_spectrum(samples: &[GreenSample]) -> Result<PurcellSpectrum> {
    if samples.is_empty() {
        return Err(Error::Precondition("empty spectrum".into()));
    }
    let mut points: Vec<(f64, f64)> = samples.iter().map(|s| (s.energy_ev, s.purcell)).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let peak = points
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    Ok(PurcellSpectrum {
        points,
        peak_ev: peak.0,
        peak_purcell: peak.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::vacuum_im_g;

    fn rec_for(g: Complex64, e: f64, j: Complex64, delta_nm: f64) -> ExtractionRecord {
        // invert the extraction formula
        let w = Frequency(e).omega().unwrap();
        let d = delta_nm * 1e-9;
        let p = Complex64::new(0.0, 1.0) * j * d * d * d / w;
        ExtractionRecord {
            energy_ev: e,
            e_src: g * p / EPS0,
            j_src: j,
            delta: Length(delta_nm),
            component: Axis::Y,
        }
    }

    #[test]
    fn vacuum_field_gives_unit_purcell() {
        let e = 2.7;
        let g = Complex64::new(-3e24, vacuum_im_g(Frequency(e)).unwrap());
        let s = extract_gf(&rec_for(g, e, Complex64::new(0.3, -1.1), 2.0)).unwrap();
        assert!((s.purcell - 1.0).abs() < 1e-12);
        assert!((s.g - g).norm() < 1e-12 * g.norm());
    }

    #[test]
    fn amplitude_scaling_is_invisible() {
        let g = Complex64::new(1e23, 4e22);
        let a = rec_for(g, 3.0, Complex64::new(1.0, 0.5), 1.0);
        let b = ExtractionRecord {
            e_src: 2.0 * a.e_src,
            j_src: 2.0 * a.j_src,
            ..a
        };
        assert_eq!(extract_gf(&a).unwrap().purcell, extract_gf(&b).unwrap().purcell);
    }

    #[test]
    fn zero_current_is_rejected() {
        let mut r = rec_for(Complex64::new(1.0, 1.0), 3.0, Complex64::new(1.0, 0.0), 1.0);
        r.j_src = Complex64::new(0.0, 0.0);
        assert!(matches!(extract_gf(&r), Err(Error::SpectralFloor { .. })));
    }

    #[test]
    fn spectrum_is_sorted_and_peaked() {
        let mk = |e: f64, rho: f64| {
            GreenSample::new(
                Frequency(e),
                Complex64::new(0.0, rho * vacuum_im_g(Frequency(e)).unwrap()),
            )
            .unwrap()
        };
        let s = purcell_spectrum(&[mk(3.0, 2.0), mk(2.5, 1.0), mk(3.2, 9.0)]).unwrap();
        assert_eq!(s.points[0].0, 2.5);
        assert_eq!(s.peak_ev, 3.2);
        assert!((s.peak_purcell - 9.0).abs() < 1e-12);
        assert!((s.at(2.98) - 2.0).abs() < 1e-12);
        assert!(purcell_spectrum(&[]).is_err());
    }
}
