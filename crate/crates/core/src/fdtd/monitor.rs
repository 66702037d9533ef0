//! Running discrete Fourier transforms at the source edge.

use num_complex::Complex64;

use crate::units::Frequency;
use crate::Result;

/// Accumulates `Σ f(t) exp(+iωt) Δt` for the field at integer steps and
/// the injected current at half steps. The `exp(+iωt)` kernel matches the
/// `exp(-iωt)` time convention.
#[derive(Debug, Clone)]
pub struct DftMonitor {
    pub frequencies: Vec<Frequency>,
    omegas: Vec<f64>,
    dt: f64,
    pub e: Vec<Complex64>,
    pub j: Vec<Complex64>,
}

impl DftMonitor {
    pub fn new(frequencies: &[Frequency], dt: f64) -> Result<Self> {
        let omegas = frequencies
            .iter()
            .map(|f| f.omega())
            .collect::<Result<Vec<_>>>()?;
        let zero = vec![Complex64::new(0.0, 0.0); frequencies.len()];
        Ok(Self {
            frequencies: frequencies.to_vec(),
            omegas,
            dt,
            e: zero.clone(),
            j: zero,
        })
    }

    /// Field sample at `t = n Δt`.
    pub fn add_field(&mut self, n: usize, value: f64) {
        if value == 0.0 {
            return;
        }
        accumulate(&mut self.e, &self.omegas, n as f64 * self.dt, value * self.dt);
    }

    /// Current sample at `t = (n + ½) Δt`.
    pub fn add_current(&mut self, n: usize, value: f64) {
        if value == 0.0 {
            return;
        }
        accumulate(
            &mut self.j,
            &self.omegas,
            (n as f64 + 0.5) * self.dt,
            value * self.dt,
        );
    }
}

fn accumulate(acc: &mut [Complex64], omegas: &[f64], t: f64, weight: f64) {
    for (a, &w) in acc.iter_mut().zip(omegas) {
        let (s, c) = (w * t).sin_cos();
        *a += Complex64::new(weight * c, weight * s);
    }
}
