//! Convolutional PML with complex-frequency-shifted stretching
//! `s = κ + σ/(α - iωε0)`.
//!
//! The main Yee loops use plain differences; every PML correction, the
//! `(1/κ - 1)` rescaling included, is applied by the slab passes here.

use crate::units::{ETA0, EPS0, HBAR, Q_E};

const ORDER: f64 = 3.0;
const KAPPA_MAX: f64 = 5.0;
const SIGMA_SCALE: f64 = 0.8;
/// CFS shift expressed as an energy, `α_max = ε0 ω(0.3 eV)`.
const ALPHA_EV: f64 = 0.3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct PmlPoint {
    /// Integer node (E-type) or half-node base `p` of `p + ½` (H-type).
    pub pos: usize,
    pub b: f64,
    pub c: f64,
    /// `1/κ - 1`.
    pub ik_m1: f64,
}

/// Graded coefficients along one axis.
#[derive(Debug, Clone)]
pub(crate) struct AxisProfile {
    pub e: Vec<PmlPoint>,
    pub h: Vec<PmlPoint>,
}

impl AxisProfile {
    /// `cells` cells along the axis with `lo` and `hi` absorbing cells at
    /// either end; `lo = 0` for an axis cut by a mirror plane.
    pub fn new(cells: usize, lo: usize, hi: usize, delta: f64, dt: f64, eps_bg: f64) -> Self {
        let sigma_max = SIGMA_SCALE * (ORDER + 1.0) / (ETA0 * delta * eps_bg.sqrt());
        let alpha_max = EPS0 * ALPHA_EV * Q_E / HBAR;
        let depth = |x: f64| -> f64 {
            let top = (cells - hi) as f64;
            if x < lo as f64 {
                (lo as f64 - x) / lo as f64
            } else if x > top {
                (x - top) / hi as f64
            } else {
                0.0
            }
        };
        let point = |pos: usize, x: f64| -> Option<PmlPoint> {
            let rho = depth(x);
            if rho <= 0.0 {
                return None;
            }
            let grade = rho.powf(ORDER);
            let sigma = sigma_max * grade;
            let kappa = 1.0 + (KAPPA_MAX - 1.0) * grade;
            let alpha = alpha_max * (1.0 - rho);
            let b = (-(sigma / kappa + alpha) * dt / EPS0).exp();
            let c = if sigma > 0.0 {
                sigma * (b - 1.0) / (sigma * kappa + kappa * kappa * alpha)
            } else {
                0.0
            };
            Some(PmlPoint {
                pos,
                b,
                c,
                ik_m1: 1.0 / kappa - 1.0,
            })
        };
        let e = (1..cells).filter_map(|p| point(p, p as f64)).collect();
        let h = (0..cells).filter_map(|p| point(p, p as f64 + 0.5)).collect();
        Self { e, h }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_is_graded_and_symmetric() {
        let p = AxisProfile::new(40, 8, 8, 1e-9, 1e-18, 1.0);
        assert_eq!(p.e.len(), 2 * 7);
        assert_eq!(p.h.len(), 2 * 8);
        // deeper points attenuate more
        assert!(p.e[0].b < p.e[6].b);
        assert!(p.e[0].ik_m1 < p.e[6].ik_m1);
        let first = p.e.first().unwrap();
        let last = p.e.last().unwrap();
        assert_eq!(first.pos + last.pos, 40);
        assert!((first.b - last.b).abs() < 1e-15);
    }

    #[test]
    fn one_sided_profile() {
        let p = AxisProfile::new(30, 0, 8, 1e-9, 1e-18, 1.0);
        assert_eq!(p.e.len(), 7);
        assert_eq!(p.h.len(), 8);
        assert!(p.e.iter().all(|q| q.pos > 22));
    }
}
