//! Spherical Bessel and Hankel functions of complex argument.
//!
//! High multipole orders at small arguments overflow (`h_l`) or underflow
//! (`j_l`) double precision long before the products that enter a
//! scattering series do. [`RiccatiTable`] therefore keeps the Riccati forms
//! `ψ_l(x) = x j_l(x)` and `ξ_l(x) = x h_l^(1)(x)` as logarithms plus
//! logarithmic derivatives:
//!
//! * `j_l / j_{l-1}` by downward recurrence (the minimal solution),
//! * `h_l / h_{l-1}` by upward recurrence (the dominant solution),
//!
//! and callers combine them in log space before exponentiating.

use num_complex::Complex64;

use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Largest |ln value| that still exponentiates to a normal double.
const LN_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    /// Spherical Bessel `j_l`.
    J,
    /// Spherical Hankel of the first kind `h_l^(1) = j_l + i y_l`.
    H1,
}

/// `z_l(x)`, `z_l'(x)` and the Riccati pair `x z_l(x)`, `d/dx [x z_l(x)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: Complex64,
    pub derivative: Complex64,
    pub riccati: Complex64,
    pub riccati_derivative: Complex64,
}

/// Log-domain Riccati-Bessel data for one argument and orders `0..=l_max`.
#[derive(Debug, Clone)]
pub struct RiccatiTable {
    pub x: Complex64,
    ln_psi: Vec<Complex64>,
    dlog_psi: Vec<Complex64>,
    ln_xi: Vec<Complex64>,
    dlog_xi: Vec<Complex64>,
}

impl RiccatiTable {
    pub fn new(x: Complex64, l_max: usize) -> Result<Self> {
        if !(x.re.is_finite() && x.im.is_finite()) || x.norm() == 0.0 {
            return Err(Error::Domain {
                what: "|x| of spherical Bessel argument",
                value: x.norm(),
            });
        }
        // ratio[l] = j_l / j_{l-1}, l = 1..=l_max+1, from the continued fraction
        // r_l = x / (2l + 1 - x r_{l+1}).
        let top = l_max + 1;
        let start = top + 32 + (x.norm().ceil() as usize) + ((40.0 * top as f64).sqrt() as usize);
        let mut ratio = vec![Complex64::new(0.0, 0.0); top + 1];
        let mut r = Complex64::new(0.0, 0.0);
        for l in (1..=start).rev() {
            r = x / ((2 * l + 1) as f64 - x * r);
            if l <= top {
                ratio[l] = r;
            }
        }

        let mut ln_psi = Vec::with_capacity(l_max + 1);
        let mut dlog_psi = Vec::with_capacity(l_max + 1);
        let mut acc = x.sin().ln();
        for l in 0..=l_max {
            if l > 0 {
                acc += ratio[l].ln();
            }
            ln_psi.push(acc);
            // ψ_l' = (l+1)/x ψ_l - ψ_{l+1}
            dlog_psi.push((l + 1) as f64 / x - ratio[l + 1]);
        }

        let mut ln_xi = Vec::with_capacity(l_max + 1);
        let mut dlog_xi = Vec::with_capacity(l_max + 1);
        let mut acc = (-I * (I * x).exp()).ln();
        ln_xi.push(acc);
        dlog_xi.push(I);
        let mut sigma = 1.0 / x - I;
        for l in 1..=l_max {
            if l > 1 {
                sigma = (2 * l - 1) as f64 / x - 1.0 / sigma;
            }
            acc += sigma.ln();
            ln_xi.push(acc);
            // ξ_l' = ξ_{l-1} - (l/x) ξ_l
            dlog_xi.push(1.0 / sigma - l as f64 / x);
        }
        Ok(Self {
            x,
            ln_psi,
            dlog_psi,
            ln_xi,
            dlog_xi,
        })
    }

    pub fn l_max(&self) -> usize {
        self.ln_psi.len() - 1
    }

    /// `ln ψ_l(x)` (branch arbitrary; only its exponential is meaningful).
    pub fn ln_psi(&self, l: usize) -> Complex64 {
        self.ln_psi[l]
    }

    pub fn ln_xi(&self, l: usize) -> Complex64 {
        self.ln_xi[l]
    }

    /// `ψ_l'(x) / ψ_l(x)`.
    pub fn dlog_psi(&self, l: usize) -> Complex64 {
        self.dlog_psi[l]
    }

    /// `ξ_l'(x) / ξ_l(x)`.
    pub fn dlog_xi(&self, l: usize) -> Complex64 {
        self.dlog_xi[l]
    }

    pub fn psi(&self, l: usize) -> Result<Complex64> {
        checked_exp(self.ln_psi[l], l, self.x)
    }

    pub fn xi(&self, l: usize) -> Result<Complex64> {
        checked_exp(self.ln_xi[l], l, self.x)
    }
}

fn checked_exp(ln: Complex64, l: usize, x: Complex64) -> Result<Complex64> {
    if ln.re.abs() > LN_LIMIT || !ln.re.is_finite() {
        return Err(Error::BesselOverflow { l, x_abs: x.norm() });
    }
    Ok(ln.exp())
}

/// Value and derivative of `j_l` or `h_l^(1)` together with the Riccati
/// forms. Errors when the value is not representable in double precision
/// (e.g. `h_150` at `|x| ≲ 1`).
pub fn spherical_bessel(kind: BesselKind, l: usize, x: Complex64) -> Result<BesselValue> {
    let t = RiccatiTable::new(x, l)?;
    let (riccati, dlog) = match kind {
        BesselKind::J => (t.psi(l)?, t.dlog_psi(l)),
        BesselKind::H1 => (t.xi(l)?, t.dlog_xi(l)),
    };
    let riccati_derivative = riccati * dlog;
    let value = riccati / x;
    let derivative = (riccati_derivative - value) / x;
    Ok(BesselValue {
        value,
        derivative,
        riccati,
        riccati_derivative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms_low_order() {
        let v = spherical_bessel(BesselKind::J, 0, c(1.0, 0.0)).unwrap();
        assert!((v.value - c(0.841_470_984_807_896_5, 0.0)).norm() < 1e-14);
        let x = c(0.7, 0.3);
        let j1 = x.sin() / (x * x) - x.cos() / x;
        let v = spherical_bessel(BesselKind::J, 1, x).unwrap();
        assert!((v.value - j1).norm() < 1e-14 * j1.norm());
        let h1 = -(I * x).exp() * (x + I) / (x * x);
        let v = spherical_bessel(BesselKind::H1, 1, x).unwrap();
        assert!((v.value - h1).norm() < 1e-13 * h1.norm());
        // derivative against a central difference
        let h = 1e-6;
        let fp = spherical_bessel(BesselKind::H1, 3, x + h).unwrap().value;
        let fm = spherical_bessel(BesselKind::H1, 3, x - h).unwrap().value;
        let d = spherical_bessel(BesselKind::H1, 3, x).unwrap().derivative;
        assert!(((fp - fm) / (2.0 * h) - d).norm() < 1e-6 * d.norm());
    }

    #[test]
    fn small_argument_power_law() {
        // j_l(x) ≈ x^l/(2l+1)!! for |x| ≪ 1
        let x = c(1e-3, 0.0);
        let v = spherical_bessel(BesselKind::J, 4, x).unwrap();
        let dfact = 945.0; // 9!!
        assert!((v.value.re / (1e-12 / dfact) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn wronskian_identity_up_to_l_60() {
        let args = [
            c(0.5, 0.0),
            c(3.0, 0.0),
            c(17.0, 0.0),
            c(0.3, 0.9),
            c(2.0, 1.5),
            c(0.05, 0.4),
            c(8.0, 0.2),
        ];
        for &x in &args {
            let t = RiccatiTable::new(x, 60).unwrap();
            for l in 0..=60 {
                // Riccati form: ψξ' - ψ'ξ = i, evaluated in log space.
                let prod = (t.ln_psi(l) + t.ln_xi(l)).exp();
                let w = prod * (t.dlog_xi(l) - t.dlog_psi(l));
                assert!((w - I).norm() < 1e-9, "x={x} l={l} w={w}");
                // Direct form j h' - j' h = i/x² where representable.
                if let (Ok(j), Ok(h)) = (
                    spherical_bessel(BesselKind::J, l, x),
                    spherical_bessel(BesselKind::H1, l, x),
                ) {
                    let wd = j.value * h.derivative - j.derivative * h.value;
                    let target = I / (x * x);
                    assert!((wd - target).norm() < 1e-8 * target.norm(), "x={x} l={l}");
                }
            }
        }
    }

    #[test]
    fn hankel_decays_on_imaginary_axis() {
        // h_0(i t) = -i e^{-t}/(i t) = -e^{-t}/t
        for &t in &[5.0, 20.0, 60.0] {
            let v = spherical_bessel(BesselKind::H1, 0, c(0.0, t)).unwrap();
            let expect = -(-t).exp() / t;
            assert!((v.value.re / expect - 1.0).abs() < 1e-12);
            assert!(v.value.im.abs() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn overflow_is_reported() {
        let r = spherical_bessel(BesselKind::H1, 150, c(0.01, 0.0));
        assert!(matches!(r, Err(Error::BesselOverflow { l: 150, .. })));
        // The log-domain table still holds the value.
        let t = RiccatiTable::new(c(0.01, 0.0), 150).unwrap();
        assert!(t.ln_xi(150).re > 700.0);
        assert!(spherical_bessel(BesselKind::J, 0, c(0.0, 0.0)).is_err());
    }
}
