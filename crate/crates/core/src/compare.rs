//! Deviation between two spectra on the same energy grid.

use serde::Serialize;

use crate::output::SpectrumRow;
use crate::{Error, Result};

/// Energies closer than this (eV) count as the same sample.
pub const ENERGY_MATCH_EV: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub points: usize,
    /// Largest `|a/b - 1|` of the Purcell factor.
    pub max_rel: f64,
    pub median_rel: f64,
    pub worst_energy_ev: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Relative Purcell deviation of `a` against the reference `b`.
pub fn compare_spectra(a: &[SpectrumRow], b: &[SpectrumRow], tol: f64) -> Result<CompareReport> {
    if a.len() != b.len() {
        return Err(Error::MismatchedGrids(format!(
            "{} vs {} samples",
            a.len(),
            b.len()
        )));
    }
    let pairs: Vec<(f64, f64, f64)> = a
        .iter()
        .map(|r| (r.energy_ev, r.purcell))
        .zip(b.iter().map(|r| (r.energy_ev, r.purcell)))
        .map(|((ea, pa), (eb, pb))| (ea, eb, pa, pb))
        .map(|(ea, eb, pa, pb)| {
            if (ea - eb).abs() > ENERGY_MATCH_EV {
                Err(Error::MismatchedGrids(format!("{ea} eV vs {eb} eV")))
            } else {
                Ok((ea, pa, pb))
            }
        })
        .collect::<Result<_>>()?;
    compare_values(&pairs, tol)
}

/// `(energy, value, reference)` triples.
pub fn compare_values(pairs: &[(f64, f64, f64)], tol: f64) -> Result<CompareReport> {
    if pairs.is_empty() {
        return Err(Error::MismatchedGrids("no samples".into()));
    }
    let mut devs: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(e, v, r)| (e, (v / r - 1.0).abs()))
        .collect();
    let (worst_energy_ev, max_rel) = devs
        .iter()
        .copied()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");
    devs.sort_by(|x, y| x.1.total_cmp(&y.1));
    let m = devs.len();
    let median_rel = if m % 2 == 1 {
        devs[m / 2].1
    } else {
        0.5 * (devs[m / 2 - 1].1 + devs[m / 2].1)
    };
    Ok(CompareReport {
        points: m,
        max_rel,
        median_rel,
        worst_energy_ev,
        tol,
        pass: max_rel <= tol,
    })
}
