//! Dyadic Green function of concentric spherical layers.
//!
//! In every layer the radial dependence of a TE (M) or TM (N) multipole of
//! order `l` is `f(r) = A ψ_l(k r) + B ξ_l(k r)`. Across an interface at
//! radius `a` the admittance
//!
//! ```text
//! TE: Y = k f'/f        TM: Y = (f'/f) / k
//! ```
//!
//! is continuous (tangential E and H, μ = 1). Propagating the admittance of
//! the origin-regular solution outward and of the radiating solution inward
//! gives the two reflection coefficients seen in the source layer:
//!
//! * `R`: outgoing amplitude produced by the inner layers for a unit
//!   regular wave (`ψ + R ξ`, the negative of the Mie coefficient),
//! * `C`: regular amplitude produced by the outer layers for a unit
//!   outgoing wave (`ξ + C ψ`).
//!
//! For an emitter on the z axis at radius `r_d` in layer `s` with
//! `k = k_s`, `x = k r_d`:
//!
//! ```text
//! G_tan = i k0² k / 8π Σ_l (2l+1) [K_TM(ψ', ξ') + K_TE(ψ, ξ)] / x²
//! G_rad = i k0² k / 4π Σ_l l(l+1)(2l+1) K_TM(ψ, ξ) / x⁴
//! K(u, v) = (R v² + C u² + 2 R C u v) / (1 - R C)
//! ```
//!
//! Products like `R ξ_l(x)²` are formed in log space so orders up to 150
//! at small arguments stay finite.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::RiccatiTable;
use super::{vacuum_im_g, GreenSample};
use crate::materials::{refractive_index, Medium};
use crate::units::{vacuum_wavevector, Frequency};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hard cap on the multipole order.
pub const L_CAP: usize = 150;
/// Relative size below which a term counts as tail.
pub const TAIL_TOL: f64 = 1e-8;
/// Consecutive tail terms required to stop.
pub const TAIL_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Dipole perpendicular to the radius vector (x or y on the z axis).
    Tangential,
    /// Dipole along the radius vector.
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
}

/// Concentric layers, innermost first. `media.len() == radii_nm.len() + 1`
/// and the last medium is the unbounded background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereStack {
    pub radii_nm: Vec<f64>,
    pub media: Vec<Medium>,
    /// Emitter (and observation) radius, nm.
    pub r_d_nm: f64,
    pub orientation: Orientation,
}

/// Reflection coefficients in the layer holding the emitter; `None` where
/// the layer has no inner (core) or outer (background) interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveCoefficients {
    pub inner: Option<Complex64>,
    pub outer: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackCoefficients {
    pub te: WaveCoefficients,
    pub tm: WaveCoefficients,
}

impl SphereStack {
    pub fn new(
        radii_nm: Vec<f64>,
        media: Vec<Medium>,
        r_d_nm: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        let s = Self {
            radii_nm,
            media,
            r_d_nm,
            orientation,
        };
        s.validate()?;
        Ok(s)
    }

    /// Homogeneous sphere of radius `a` in a background.
    pub fn sphere(
        radius_nm: f64,
        sphere: Medium,
        background: Medium,
        r_d_nm: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        Self::new(vec![radius_nm], vec![sphere, background], r_d_nm, orientation)
    }

    pub fn validate(&self) -> Result<()> {
        if self.media.len() != self.radii_nm.len() + 1 {
            return Err(Error::InvalidStack(format!(
                "{} media for {} interfaces",
                self.media.len(),
                self.radii_nm.len()
            )));
        }
        let mut prev = 0.0;
        for &r in &self.radii_nm {
            if !(r.is_finite() && r > prev) {
                return Err(Error::InvalidStack(
                    "radii must be positive and strictly ascending".into(),
                ));
            }
            prev = r;
        }
        for m in &self.media {
            m.validate()?;
        }
        if !(self.r_d_nm.is_finite() && self.r_d_nm >= 0.0) {
            return Err(Error::InvalidStack(format!("bad emitter radius {}", self.r_d_nm)));
        }
        if self.radii_nm.iter().any(|&r| r == self.r_d_nm) {
            return Err(Error::InvalidStack("emitter lies on an interface".into()));
        }
        Ok(())
    }

    /// Index of the layer containing the emitter.
    pub fn source_layer(&self) -> usize {
        self.radii_nm.iter().filter(|&&r| r < self.r_d_nm).count()
    }
}

/// Per-frequency data shared by all multipole orders.
struct Prepared<'a> {
    stack: &'a SphereStack,
    k0: f64,
    /// Wavenumber in each layer, 1/m.
    k: Vec<Complex64>,
    /// `inner_side[j]`: table at `k_j a_j`; `outer_side[j]`: at `k_{j+1} a_j`.
    inner_side: Vec<RiccatiTable>,
    outer_side: Vec<RiccatiTable>,
    /// Table at the emitter, `None` at the origin.
    emitter: Option<RiccatiTable>,
    layer: usize,
}

impl<'a> Prepared<'a> {
    fn new(stack: &'a SphereStack, e: Frequency, l_max: usize) -> Result<Self> {
        stack.validate()?;
        let k0 = vacuum_wavevector(e)?;
        let k = stack
            .media
            .iter()
            .map(|m| Ok(k0 * refractive_index(m, e)?))
            .collect::<Result<Vec<_>>>()?;
        let mut inner_side = Vec::new();
        let mut outer_side = Vec::new();
        for (j, &a) in stack.radii_nm.iter().enumerate() {
            let a = a * 1e-9;
            inner_side.push(RiccatiTable::new(k[j] * a, l_max)?);
            outer_side.push(RiccatiTable::new(k[j + 1] * a, l_max)?);
        }
        let layer = stack.source_layer();
        let emitter = if stack.r_d_nm > 0.0 {
            Some(RiccatiTable::new(k[layer] * (stack.r_d_nm * 1e-9), l_max)?)
        } else {
            None
        };
        Ok(Self {
            stack,
            k0,
            k,
            inner_side,
            outer_side,
            emitter,
            layer,
        })
    }

    fn weight(&self, pol: Polarization, j: usize) -> Complex64 {
        match pol {
            Polarization::Te => self.k[j],
            Polarization::Tm => 1.0 / self.k[j],
        }
    }

    fn singular(&self, l: usize) -> Error {
        Error::SingularMatching {
            l,
            energy_ev: self.k0 * crate::units::C0 * crate::units::HBAR / crate::units::Q_E,
        }
    }

    /// `ln R` for the emitter layer (inner reflection), if it has an inner
    /// interface.
    fn ln_inner(&self, pol: Polarization, l: usize) -> Result<Option<Complex64>> {
        let s = self.layer;
        if s == 0 {
            return Ok(None);
        }
        // Log-derivative of the regular solution at a_0; the admittance
        // is `weight * d`. Weights enter as ratios so equal media match
        // exactly.
        let mut d = self.inner_side[0].dlog_psi(l);
        for j in 1..s {
            let t_in = &self.outer_side[j - 1];
            let t_out = &self.inner_side[j];
            let yw = d * (self.weight(pol, j - 1) / self.weight(pol, j));
            let q_in = reflect_regular(t_in, l, yw).ok_or_else(|| self.singular(l))?;
            let shift = t_out.ln_xi(l) + t_in.ln_psi(l) - t_in.ln_xi(l) - t_out.ln_psi(l);
            let q = q_in * shift.exp();
            d = (t_out.dlog_psi(l) + q * t_out.dlog_xi(l)) / (1.0 + q);
        }
        let t = &self.outer_side[s - 1];
        let yw = d * (self.weight(pol, s - 1) / self.weight(pol, s));
        let q = reflect_regular(t, l, yw).ok_or_else(|| self.singular(l))?;
        Ok(Some(q.ln() + t.ln_psi(l) - t.ln_xi(l)))
    }

    /// `ln C` for the emitter layer (outer reflection), if it has an outer
    /// interface.
    fn ln_outer(&self, pol: Polarization, l: usize) -> Result<Option<Complex64>> {
        let s = self.layer;
        let n = self.stack.radii_nm.len();
        if s == n {
            return Ok(None);
        }
        // Log-derivative of the radiating solution at a_{N-1}.
        let mut d = self.outer_side[n - 1].dlog_xi(l);
        for j in (s + 1..n).rev() {
            let t_out = &self.inner_side[j];
            let t_in = &self.outer_side[j - 1];
            let yw = d * (self.weight(pol, j + 1) / self.weight(pol, j));
            let p_out = reflect_outgoing(t_out, l, yw).ok_or_else(|| self.singular(l))?;
            let shift = t_in.ln_psi(l) + t_out.ln_xi(l) - t_out.ln_psi(l) - t_in.ln_xi(l);
            let p = p_out * shift.exp();
            d = (p * t_in.dlog_psi(l) + t_in.dlog_xi(l)) / (p + 1.0);
        }
        let t = &self.inner_side[s];
        let yw = d * (self.weight(pol, s + 1) / self.weight(pol, s));
        let p = reflect_outgoing(t, l, yw).ok_or_else(|| self.singular(l))?;
        Ok(Some(p.ln() + t.ln_xi(l) - t.ln_psi(l)))
    }

    /// Contribution of order `l` to the scattered Green function, m⁻³.
    fn term(&self, l: usize) -> Result<Complex64> {
        let ks = self.k[self.layer];
        let k0sq = self.k0 * self.k0;
        let Some(t) = &self.emitter else {
            // At the origin only the l = 1 TM wave has a non-zero field.
            if l != 1 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Ok(match self.ln_outer(Polarization::Tm, 1)? {
                Some(ln_c) => I * k0sq * ks * ln_c.exp() / (6.0 * PI),
                None => Complex64::new(0.0, 0.0),
            });
        };
        let x = t.x;
        let lf = l as f64;
        let kernel = |pol: Polarization, derivative: bool| -> Result<Complex64> {
            let ln_r = self.ln_inner(pol, l)?;
            let ln_c = self.ln_outer(pol, l)?;
            let (ln_u, ln_v) = (t.ln_psi(l), t.ln_xi(l));
            let (du, dv) = if derivative {
                (t.dlog_psi(l), t.dlog_xi(l))
            } else {
                (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            };
            let mut num = Complex64::new(0.0, 0.0);
            let mut rc = Complex64::new(0.0, 0.0);
            if let Some(ln_r) = ln_r {
                num += (ln_r + 2.0 * ln_v).exp() * dv * dv;
            }
            if let Some(ln_c) = ln_c {
                num += (ln_c + 2.0 * ln_u).exp() * du * du;
            }
            if let (Some(ln_r), Some(ln_c)) = (ln_r, ln_c) {
                rc = (ln_r + ln_c).exp();
                num += 2.0 * (ln_r + ln_c + ln_u + ln_v).exp() * du * dv;
            }
            Ok(num / (1.0 - rc))
        };
        Ok(match self.stack.orientation {
            Orientation::Tangential => {
                let k = kernel(Polarization::Tm, true)? + kernel(Polarization::Te, false)?;
                I * k0sq * ks / (8.0 * PI) * (2.0 * lf + 1.0) * k / (x * x)
            }
            Orientation::Radial => {
                let k = kernel(Polarization::Tm, false)?;
                I * k0sq * ks / (4.0 * PI) * lf * (lf + 1.0) * (2.0 * lf + 1.0) * k
                    / (x * x * x * x)
            }
        })
    }
}

/// `q = R ξ(y)/ψ(y)` for a layer whose inner boundary presents
/// admittance `yw` (already divided by the layer weight).
fn reflect_regular(t: &RiccatiTable, l: usize, yw: Complex64) -> Option<Complex64> {
    let den = t.dlog_xi(l) - yw;
    (den.norm() > 0.0).then(|| -(t.dlog_psi(l) - yw) / den)
}

/// `p = C ψ(x)/ξ(x)` for a layer whose outer boundary presents `yw`.
fn reflect_outgoing(t: &RiccatiTable, l: usize, yw: Complex64) -> Option<Complex64> {
    let den = t.dlog_psi(l) - yw;
    (den.norm() > 0.0).then(|| -(t.dlog_xi(l) - yw) / den)
}

/// Reflection coefficients for TE and TM waves of order `l ≥ 1` in the
/// layer containing the emitter.
pub fn stack_coefficients(s: &SphereStack, l: usize, e: Frequency) -> Result<StackCoefficients> {
    if l == 0 {
        return Err(Error::Precondition("multipole order must be >= 1".into()));
    }
    let p = Prepared::new(s, e, l)?;
    let exp_checked = |ln: Option<Complex64>| -> Result<Option<Complex64>> {
        match ln {
            None => Ok(None),
            Some(v) if v.re > 700.0 => Err(Error::BesselOverflow {
                l,
                x_abs: p.k[p.layer].norm(),
            }),
            Some(v) => Ok(Some(v.exp())),
        }
    };
    let coeffs = |pol| -> Result<WaveCoefficients> {
        Ok(WaveCoefficients {
            inner: exp_checked(p.ln_inner(pol, l)?)?,
            outer: exp_checked(p.ln_outer(pol, l)?)?,
        })
    };
    Ok(StackCoefficients {
        te: coeffs(Polarization::Te)?,
        tm: coeffs(Polarization::Tm)?,
    })
}

/// Truncation of the multipole series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesPolicy {
    /// Stop once `TAIL_RUN` consecutive terms are below `TAIL_TOL` of the
    /// running sum; error at `L_CAP`.
    Adaptive,
    /// Sum exactly `1..=l_max`.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub l_used: usize,
}

pub fn scattered_gf_series(
    s: &SphereStack,
    e: Frequency,
    policy: SeriesPolicy,
) -> Result<SeriesResult> {
    let l_max = match policy {
        SeriesPolicy::Adaptive => L_CAP,
        SeriesPolicy::Fixed(l) => l.max(1),
    };
    let p = Prepared::new(s, e, l_max)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    let mut last_rel = f64::INFINITY;
    for l in 1..=l_max {
        let term = p.term(l)?;
        sum += term;
        if let SeriesPolicy::Adaptive = policy {
            let scale = sum.norm();
            last_rel = if scale > 0.0 {
                term.norm() / scale
            } else if term.norm() == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            quiet = if last_rel < TAIL_TOL || (term.norm() == 0.0 && scale == 0.0) {
                quiet + 1
            } else {
                0
            };
            if quiet >= TAIL_RUN {
                return Ok(SeriesResult {
                    value: sum,
                    l_used: l,
                });
            }
        }
    }
    match policy {
        SeriesPolicy::Fixed(_) => Ok(SeriesResult {
            value: sum,
            l_used: l_max,
        }),
        SeriesPolicy::Adaptive => Err(Error::SeriesNotConverged {
            l_max: L_CAP,
            tail: last_rel,
        }),
    }
}

/// `G_ii^scatt(r_d, r_d)` in m⁻³ for the stack's orientation.
pub fn scattered_gf(s: &SphereStack, e: Frequency) -> Result<Complex64> {
    Ok(scattered_gf_series(s, e, SeriesPolicy::Adaptive)?.value)
}

/// Single multipole contribution (used to isolate e.g. the dipolar TM
/// resonance).
pub fn scattered_gf_term(s: &SphereStack, e: Frequency, l: usize) -> Result<Complex64> {
    Prepared::new(s, e, l.max(1))?.term(l)
}

/// Purcell factor of an emitter in the outermost (lossless) layer,
/// `n_b + Im G_scatt / (k0³/6π)`.
pub fn total_ldos_outside(s: &SphereStack, e: Frequency) -> Result<f64> {
    if s.source_layer() != s.radii_nm.len() {
        return Err(Error::Precondition(
            "emitter must lie in the outermost layer".into(),
        ));
    }
    let background = s.media.last().expect("validated stack");
    let n = refractive_index(background, e)?;
    if n.im != 0.0 {
        return Err(Error::Precondition("background must be lossless".into()));
    }
    let g = scattered_gf(s, e)?;
    Ok(n.re + g.im / vacuum_im_g(e)?)
}

/// Local-field Green function for an emitter at the center of a lossless
/// core: homogeneous `Im` part of the core plus the scattering of all
/// shells. The real part holds only the (finite) scattered contribution.
pub fn real_cavity_gf_center(s: &SphereStack, e: Frequency) -> Result<GreenSample> {
    let core = s
        .media
        .first()
        .ok_or_else(|| Error::InvalidStack("empty stack".into()))?;
    let n = refractive_index(core, e)?;
    if n.im != 0.0 || !core.is_lossless() {
        return Err(Error::Precondition(
            "real-cavity model needs a lossless core".into(),
        ));
    }
    let centered = SphereStack {
        r_d_nm: 0.0,
        ..s.clone()
    };
    let g_s = scattered_gf(&centered, e)?;
    let k0 = vacuum_wavevector(e)?;
    let hom = k0.powi(3) * n.re / (6.0 * PI);
    GreenSample::new(e, g_s + I * hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::bessel::{spherical_bessel, BesselKind};
    use crate::materials::{permittivity, DrudeModel};

    fn drude(gamma: f64) -> Medium {
        Medium::Drude(DrudeModel {
            damping_ev: gamma,
            ..DrudeModel::SILVER
        })
    }

    /// Mie a_n, b_n from closed-form Riccati functions (n = 1), as an
    /// independent single-interface oracle.
    fn mie_l1(m_rel: Complex64, x: Complex64) -> (Complex64, Complex64) {
        let psi = |z: Complex64| z.sin() / z - z.cos();
        let dpsi = |z: Complex64| z.sin() - z.sin() / (z * z) + z.cos() / z;
        let xi = |z: Complex64| -(I * z).exp() * (z + I) / z;
        let dxi = |z: Complex64| {
            // d/dz [-(e^{iz})(1 + i/z)]
            -(I * z).exp() * (I * (1.0 + I / z) - I / (z * z))
        };
        let mx = m_rel * x;
        let a = (m_rel * psi(mx) * dpsi(x) - psi(x) * dpsi(mx))
            / (m_rel * psi(mx) * dxi(x) - xi(x) * dpsi(mx));
        let b = (psi(mx) * dpsi(x) - m_rel * psi(x) * dpsi(mx))
            / (psi(mx) * dxi(x) - m_rel * xi(x) * dpsi(mx));
        (a, b)
    }

    #[test]
    fn riccati_closed_forms_agree_with_table() {
        let z = Complex64::new(0.8, 0.4);
        let xi = spherical_bessel(BesselKind::H1, 1, z).unwrap();
        let expect = -(I * z).exp() * (z + I) / z;
        assert!((xi.riccati - expect).norm() < 1e-13);
    }

    #[test]
    fn single_interface_matches_mie() {
        let e = Frequency(2.6);
        let s = SphereStack::sphere(20.0, drude(0.051), Medium::Vacuum, 30.0, Orientation::Tangential)
            .unwrap();
        let c = stack_coefficients(&s, 1, e).unwrap();
        let k0 = vacuum_wavevector(e).unwrap();
        let m = refractive_index(&drude(0.051), e).unwrap();
        let (a1, b1) = mie_l1(m, Complex64::new(k0 * 20e-9, 0.0));
        let r_tm = c.tm.inner.unwrap();
        let r_te = c.te.inner.unwrap();
        assert!((r_tm + a1).norm() < 1e-10 * a1.norm(), "{r_tm} vs {a1}");
        assert!((r_te + b1).norm() < 1e-10 * b1.norm(), "{r_te} vs {b1}");
        assert!(c.tm.outer.is_none());
    }

    #[test]
    fn zero_contrast_has_no_reflection() {
        let e = Frequency(3.0);
        let m = drude(0.051);
        let s = SphereStack::new(
            vec![5.0, 12.0],
            vec![Medium::Vacuum, Medium::Vacuum, Medium::Vacuum],
            8.0,
            Orientation::Tangential,
        )
        .unwrap();
        let c = stack_coefficients(&s, 2, e).unwrap();
        assert!(c.te.inner.unwrap().norm() < 1e-14);
        assert!(c.tm.outer.unwrap().norm() < 1e-12);
        let g = scattered_gf(&s, e).unwrap();
        assert!(g.norm() < 1e-12 * vacuum_im_g(e).unwrap(), "{g}");
        let s = SphereStack::sphere(10.0, m, m, 3.0, Orientation::Radial).unwrap();
        let g = scattered_gf(&s, e).unwrap();
        assert!(g.norm() < 1e-12 * vacuum_im_g(e).unwrap());
    }

    #[test]
    fn quasi_static_multipole_oracle() {
        // Small sphere: Im G_scatt against the electrostatic image series
        // Σ_l c_l α_l / (4π r^{2l+4}) with α_l = l(ε-1)/(lε+l+1) a^{2l+1},
        // c_l = l(l+1)/2 (tangential) or (l+1)² (radial).
        let e = Frequency(2.9);
        let m = drude(0.1);
        let eps = permittivity(&m, e).unwrap();
        let (a, r): (f64, f64) = (1.0e-9, 1.3e-9);
        for orient in [Orientation::Tangential, Orientation::Radial] {
            let s = SphereStack::sphere(1.0, m, Medium::Vacuum, 1.3, orient).unwrap();
            let g = scattered_gf(&s, e).unwrap();
            let mut oracle = Complex64::new(0.0, 0.0);
            for l in 1..400 {
                let lf = l as f64;
                let beta = lf * (eps - 1.0) / (lf * eps + lf + 1.0);
                let c = match orient {
                    Orientation::Tangential => lf * (lf + 1.0) / 2.0,
                    Orientation::Radial => (lf + 1.0).powi(2),
                };
                oracle += c * beta * (a / r).powi(2 * l + 1) / (4.0 * PI * r.powi(3));
            }
            assert!((g.im / oracle.im - 1.0).abs() < 2e-3, "{orient:?}: {} vs {}", g.im, oracle.im);
        }
    }

    #[test]
    fn radiation_condition_far_away() {
        let e = Frequency(2.4);
        let near = SphereStack::sphere(20.0, drude(0.051), Medium::Vacuum, 30.0, Orientation::Tangential)
            .unwrap();
        let far = SphereStack {
            r_d_nm: 1000.0,
            ..near.clone()
        };
        let farther = SphereStack {
            r_d_nm: 2000.0,
            ..near.clone()
        };
        let g_far = scattered_gf(&far, e).unwrap().norm();
        let g_farther = scattered_gf(&farther, e).unwrap().norm();
        assert!(g_far < 1e-2 * scattered_gf(&near, e).unwrap().norm());
        // far-zone tangential field of the induced dipole ~ 1/r²·(1/r) → ratio ~ 1/2
        assert!(g_farther < 0.75 * g_far, "{g_farther} vs {g_far}");
        let rho = total_ldos_outside(
            &SphereStack {
                r_d_nm: 1000.0,
                ..near
            },
            e,
        )
        .unwrap();
        assert!((rho - 1.0).abs() < 1e-3, "{rho}");
    }

    #[test]
    fn no_sphere_gives_unity() {
        let s = SphereStack::sphere(20.0, Medium::Vacuum, Medium::Vacuum, 24.0, Orientation::Tangential)
            .unwrap();
        let rho = total_ldos_outside(&s, Frequency(2.7)).unwrap();
        assert!((rho - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frohlich_resonance_of_small_sphere() {
        let m = drude(0.002);
        let s = SphereStack::sphere(2.0, m, Medium::Vacuum, 5.0, Orientation::Tangential).unwrap();
        let mut best = (0.0, 0.0);
        let mut e = 2.70;
        while e < 2.90 {
            let r = stack_coefficients(&s, 1, Frequency(e)).unwrap().tm.inner.unwrap().norm();
            if r > best.1 {
                best = (e, r);
            }
            e += 5e-4;
        }
        assert!((best.0 - 2.789).abs() < 3e-3, "{best:?}");
    }

    #[test]
    fn series_is_stable_under_doubling() {
        let e = Frequency(3.0);
        let s = SphereStack::sphere(20.0, drude(0.051), Medium::Vacuum, 24.0, Orientation::Tangential)
            .unwrap();
        let a = scattered_gf_series(&s, e, SeriesPolicy::Adaptive).unwrap();
        let b = scattered_gf_series(&s, e, SeriesPolicy::Fixed(2 * a.l_used)).unwrap();
        assert!((a.value - b.value).norm() / b.value.norm() < 1e-7);
        assert!(a.l_used > 10 && a.l_used < L_CAP);
    }

    #[test]
    fn series_cap_is_reported() {
        let s = SphereStack::sphere(20.0, drude(0.051), Medium::Vacuum, 20.2, Orientation::Tangential)
            .unwrap();
        assert!(matches!(
            scattered_gf(&s, Frequency(3.0)),
            Err(Error::SeriesNotConverged { .. })
        ));
    }

    #[test]
    fn real_cavity_all_vacuum_is_unity() {
        let s = SphereStack::new(
            vec![0.62],
            vec![Medium::Vacuum, Medium::Vacuum],
            0.0,
            Orientation::Tangential,
        )
        .unwrap();
        for &e in &[2.2, 2.9, 3.5] {
            let g = real_cavity_gf_center(&s, Frequency(e)).unwrap();
            assert!((g.purcell - 1.0).abs() < 1e-12, "{}", g.purcell);
        }
    }

    #[test]
    fn real_cavity_matches_onsager_reaction_field() {
        // Quasi-static reaction field at the center of a cavity of
        // permittivity ε_c in ε: Im of 3ε_c... written for a vacuum core,
        // G_s = 2(ε-1)/(2ε+1) / (4π R³).
        let e = Frequency(3.05);
        let m = drude(0.051);
        let eps = permittivity(&m, e).unwrap();
        let rc: f64 = 0.62e-9;
        let s = SphereStack::new(vec![0.62], vec![Medium::Vacuum, m], 0.0, Orientation::Tangential)
            .unwrap();
        let g = real_cavity_gf_center(&s, e).unwrap();
        let oracle = (2.0 * (eps - 1.0) / (2.0 * eps + 1.0)) / (4.0 * PI * rc.powi(3));
        let hom = vacuum_im_g(e).unwrap();
        assert!(((g.g.im - hom) / oracle.im - 1.0).abs() < 1e-3);
        assert!(real_cavity_gf_center(
            &SphereStack::new(vec![0.62], vec![m, Medium::Vacuum], 0.0, Orientation::Tangential)
                .unwrap(),
            e
        )
        .is_err());
    }

    #[test]
    fn invalid_stacks() {
        assert!(SphereStack::new(vec![2.0, 1.0], vec![Medium::Vacuum; 3], 5.0, Orientation::Radial)
            .is_err());
        assert!(SphereStack::new(vec![2.0], vec![Medium::Vacuum; 3], 5.0, Orientation::Radial).is_err());
        assert!(SphereStack::new(vec![2.0], vec![Medium::Vacuum; 2], 2.0, Orientation::Radial).is_err());
    }
}
