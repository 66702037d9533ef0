//! Homogeneous-medium Green function at coincidence.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::materials::{permittivity, principal_sqrt, Medium};
use crate::units::{vacuum_wavevector, Frequency, Length};
use crate::{Error, Result};

/// `Im G_ii(r, r) = k0³ n / 6π` for a lossless medium (μ = 1).
///
/// A lossy medium mixes the divergent real part into the imaginary part,
/// so the point value does not exist; this returns
/// [`Error::DivergentAtCoincidence`] and the caller should use
/// [`cube_averaged_gf`].
pub fn hom_gf_im(m: &Medium, e: Frequency) -> Result<f64> {
    let eps = permittivity(m, e)?;
    let n = principal_sqrt(eps);
    if eps.im != 0.0 || n.im != 0.0 {
        return Err(Error::DivergentAtCoincidence {
            n_re: n.re,
            n_im: n.im,
        });
    }
    let k0 = vacuum_wavevector(e)?;
    Ok(k0.powi(3) * n.re * m.permeability() / (6.0 * PI))
}

/// Green function averaged over a cube of side `delta` centered on the
/// source point:
///
/// ```text
/// <G_ii> = (1/Δ³) [ PV ∫_cube G_ii(0, r') d³r' - 1/(3ε) ]
/// ```
///
/// The `∇∇/ε` part of the kernel integrates to zero over the cube except
/// for its trace, which leaves `(2 k0²/3) ∫_cube exp(ikR)/(4πR) d³r`. Each
/// of the six pyramids joining the source to a face is integrated
/// analytically along the ray, leaving a smooth 2D integral over the face
/// that Gauss-Legendre resolves to machine precision.
pub fn cube_averaged_gf(m: &Medium, e: Frequency, delta: Length) -> Result<Complex64> {
    let d = delta.meters();
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::Domain {
            what: "cube edge (nm)",
            value: delta.nm(),
        });
    }
    let eps = permittivity(m, e)?;
    let k = vacuum_wavevector(e)? * principal_sqrt(eps);
    let b = 0.5 * d;

    // ∫_cube e^{ikR}/R d³r = 6 · 4 · ∫_0^b∫_0^b b f(kρ)/(k² ρ³) dy dz with
    // ρ² = b² + y² + z² and f(x) = e^{ix}(1 - ix) - 1.
    let face = |order: usize| -> Complex64 {
        let (nodes, weights) = gauss_legendre(order);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&u, &wu) in nodes.iter().zip(&weights) {
            let y = 0.5 * b * (u + 1.0);
            for (&v, &wv) in nodes.iter().zip(&weights) {
                let z = 0.5 * b * (v + 1.0);
                let rho = (b * b + y * y + z * z).sqrt();
                acc += wu * wv * ray_integral(k, rho) * (b / rho.powi(3));
            }
        }
        acc * (0.25 * b * b)
    };

    let mut order = 8;
    let mut prev = face(order);
    let mut change = f64::INFINITY;
    while order < 256 {
        order *= 2;
        let next = face(order);
        change = (next - prev).norm() / next.norm().max(f64::MIN_POSITIVE);
        prev = next;
        if change < 1e-12 {
            break;
        }
    }
    if change > 1e-6 {
        return Err(Error::Quadrature { achieved: change });
    }
    let cube_integral = 24.0 * prev;
    let k0 = vacuum_wavevector(e)?;
    let pv = (2.0 * k0 * k0 / 3.0) * cube_integral / (4.0 * PI);
    Ok((pv - 1.0 / (3.0 * eps)) / (d * d * d))
}

/// `f(kρ)/k² = ∫_0^1 t exp(ikρt) dt · ρ²`, stable for small `kρ`.
fn ray_integral(k: Complex64, rho: f64) -> Complex64 {
    let x = k * rho;
    let i = Complex64::new(0.0, 1.0);
    let f = if x.norm() < 0.05 {
        // Σ_{n≥2} (ix)^n (1 - n)/n!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fact = 1.0;
        for n in 1..=14 {
            term *= i * x;
            fact *= n as f64;
            if n >= 2 {
                sum += term * ((1.0 - n as f64) / fact);
            }
        }
        sum
    } else {
        (i * x).exp() * (1.0 - i * x) - 1.0
    };
    f / (k * k)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = p0;
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::vacuum_im_g;
    use crate::materials::DrudeModel;
    use crate::units::ev_from_wavelength_nm;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_value_at_500_nm() {
        let e = ev_from_wavelength_nm(500.0).unwrap();
        let g = hom_gf_im(&Medium::Vacuum, e).unwrap();
        assert!((g / 1.05276e20 - 1.0).abs() < 1e-5, "{g}");
        let g2 = hom_gf_im(&Medium::Dielectric { eps: 4.0 }, e).unwrap();
        assert!((g2 - 2.0 * g).abs() <= 1e-14 * g2);
    }

    #[test]
    fn lossy_point_value_is_an_error() {
        let r = hom_gf_im(&Medium::silver(), Frequency(2.5));
        assert!(matches!(r, Err(Error::DivergentAtCoincidence { .. })));
        // Lossless Drude below the plasma edge has imaginary n.
        let d = Medium::Drude(DrudeModel {
            damping_ev: 0.0,
            ..DrudeModel::SILVER
        });
        assert!(hom_gf_im(&d, Frequency(2.5)).is_err());
    }

    #[test]
    fn cube_average_tends_to_point_value() {
        let e = Frequency(3.0);
        let exact = vacuum_im_g(e).unwrap();
        let k0 = vacuum_wavevector(e).unwrap();
        let mut last = f64::INFINITY;
        for &d in &[8.0, 4.0, 2.0, 1.0] {
            let g = cube_averaged_gf(&Medium::Vacuum, e, Length(d)).unwrap();
            let dev = (g.im / exact - 1.0).abs();
            let kd = k0 * d * 1e-9;
            assert!(dev < kd * kd, "Δ={d}: {dev}");
            assert!(dev < last);
            last = dev;
        }
    }

    #[test]
    fn static_limit_is_cube_depolarization() {
        // Static-limit quadrature oracle: the PV integral vanishes by cubic
        // symmetry, leaving -1/(3Δ³).
        let d = 2.0;
        let g = cube_averaged_gf(&Medium::Vacuum, Frequency(1e-4), Length(d)).unwrap();
        let vol = (d * 1e-9f64).powi(3);
        assert!((g.re * vol + 1.0 / 3.0).abs() < 1e-9, "{}", g.re * vol);
    }

    #[test]
    fn static_part_matches_brute_force_cube_integral() {
        // Independent midpoint-rule integration of 2k0²/3 · e^{ikR}/(4πR)
        // over the cube (odd cell count, singular center cell handled by
        // the inscribed-ball closed form) at a strongly lossy point.
        let e = Frequency(3.22);
        let m = Medium::silver();
        let d = 2.0;
        let g = cube_averaged_gf(&m, e, Length(d)).unwrap();
        let eps = permittivity(&m, e).unwrap();
        let k = vacuum_wavevector(e).unwrap() * principal_sqrt(eps);
        let dm = d * 1e-9;
        let k0 = vacuum_wavevector(e).unwrap();
        let n = 61;
        let h = dm / n as f64;
        let i = Complex64::new(0.0, 1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let x = (a as f64 - (n / 2) as f64) * h;
                    let y = (b as f64 - (n / 2) as f64) * h;
                    let z = (c as f64 - (n / 2) as f64) * h;
                    let r = (x * x + y * y + z * z).sqrt();
                    if r == 0.0 {
                        // equal-volume ball around the singular point
                        let rb = h * (3.0 / (4.0 * PI)).cbrt();
                        acc += ((i * k * rb).exp() * (1.0 - i * k * rb) - 1.0) / (k * k);
                    } else {
                        acc += (i * k * r).exp() / (4.0 * PI * r) * h.powi(3);
                    }
                }
            }
        }
        // Compare the dynamic (PV) part alone; the depolarization term is
        // common to both and would hide quadrature errors.
        let brute = (2.0 * k0 * k0 / 3.0) * acc;
        let pv = g * dm.powi(3) + 1.0 / (3.0 * eps);
        assert!((brute - pv).norm() / pv.norm() < 1e-3, "{brute} vs {pv}");
    }

    #[test]
    fn lossy_average_is_grid_dependent_and_passive() {
        let e = Frequency(3.22);
        let m = Medium::silver();
        let g1 = cube_averaged_gf(&m, e, Length(1.0)).unwrap();
        let g2 = cube_averaged_gf(&m, e, Length(2.0)).unwrap();
        assert!(g1.im > 0.0 && g2.im > 0.0);
        // ~Δ⁻³ scaling of the dominant depolarization term.
        assert!((g1.im / g2.im - 8.0).abs() < 0.1, "{}", g1.im / g2.im);
        let v1 = cube_averaged_gf(&Medium::Vacuum, e, Length(1.0)).unwrap();
        let v2 = cube_averaged_gf(&Medium::Vacuum, e, Length(2.0)).unwrap();
        let exact = vacuum_im_g(e).unwrap();
        assert!((v1.im / exact - 1.0).abs() < 2e-3);
        assert!((v2.im / exact - 1.0).abs() < 2e-3);
    }

    #[test]
    fn cube_average_rejects_bad_edge() {
        assert!(cube_averaged_gf(&Medium::Vacuum, Frequency(2.0), Length(0.0)).is_err());
    }
}
