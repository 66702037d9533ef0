//! CSV spectra.
//!
//! ```text
//! # ldos-kit v0.1.0
//! energy_ev,re_G,im_G,purcell,scenario_hash,delta_nm,steps,residual,flag
//! 2.20000000e0,-1.23456789e24,...,3f2a...,2.00000000e0,14655,9.1e-8,decayed
//! ```
//!
//! Floats carry nine significant digits. Analytic rows have `steps = 0`,
//! `residual = 0` and `flag = analytic`.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::analytic::GreenSample;
use crate::fdtd::{RunRecord, Termination};
use crate::{Error, Result, VERSION};

pub const COLUMNS: [&str; 9] = [
    "energy_ev",
    "re_G",
    "im_G",
    "purcell",
    "scenario_hash",
    "delta_nm",
    "steps",
    "residual",
    "flag",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub energy_ev: f64,
    pub g: Complex64,
    pub purcell: f64,
    pub scenario_hash: String,
    pub delta_nm: f64,
    pub steps: usize,
    pub residual: f64,
    pub flag: String,
}

pub fn sci(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn header_line() -> String {
    format!("# ldos-kit v{VERSION}")
}

pub fn fdtd_rows(samples: &[GreenSample], run: &RunRecord, hash: &str) -> Vec<SpectrumRow> {
    let flag = match run.termination {
        Termination::Decayed => "decayed",
        Termination::MaxSteps => "max_steps",
    };
    samples
        .iter()
        .map(|s| SpectrumRow {
            energy_ev: s.energy_ev,
            g: s.g,
            purcell: s.purcell,
            scenario_hash: hash.to_string(),
            delta_nm: run.delta_nm,
            steps: run.steps,
            residual: run.residual,
            flag: flag.into(),
        })
        .collect()
}

pub fn analytic_rows(samples: &[GreenSample], hash: &str, delta_nm: f64) -> Vec<SpectrumRow> {
    samples
        .iter()
        .map(|s| SpectrumRow {
            energy_ev: s.energy_ev,
            g: s.g,
            purcell: s.purcell,
            scenario_hash: hash.to_string(),
            delta_nm,
            steps: 0,
            residual: 0.0,
            flag: "analytic".into(),
        })
        .collect()
}

pub fn format_spectrum(rows: &[SpectrumRow]) -> String {
    let mut out = header_line();
    out.push('\n');
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            sci(r.energy_ev),
            sci(r.g.re),
            sci(r.g.im),
            sci(r.purcell),
            r.scenario_hash,
            sci(r.delta_nm),
            r.steps,
            sci(r.residual),
            r.flag
        ));
    }
    out
}

/// Writes through a temporary file in the target directory, so readers
/// never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_spectrum(path: &Path, rows: &[SpectrumRow]) -> Result<()> {
    write_atomic(path, &format_spectrum(rows))
}

fn csv_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Csv(format!("line {line}: {msg}"))
}

pub fn parse_spectrum(text: &str) -> Result<Vec<SpectrumRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.starts_with("# ldos-kit v") => {}
        _ => return Err(csv_err(1, "missing '# ldos-kit v' header")),
    }
    match lines.next() {
        Some((_, l)) if l.trim() == COLUMNS.join(",") => {}
        _ => return Err(csv_err(2, "unexpected column header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != COLUMNS.len() {
            return Err(csv_err(n, format!("{} fields, expected {}", f.len(), COLUMNS.len())));
        }
        let num = |k: usize| -> Result<f64> {
            f[k].trim()
                .parse::<f64>()
                .map_err(|e| csv_err(n, format!("{}: {e}", COLUMNS[k])))
        };
        rows.push(SpectrumRow {
            energy_ev: num(0)?,
            g: Complex64::new(num(1)?, num(2)?),
            purcell: num(3)?,
            scenario_hash: f[4].trim().to_string(),
            delta_nm: num(5)?,
            steps: f[6]
                .trim()
                .parse()
                .map_err(|e| csv_err(n, format!("steps: {e}")))?,
            residual: num(7)?,
            flag: f[8].trim().to_string(),
        });
    }
    Ok(rows)
}

pub fn read_spectrum(path: &Path) -> Result<Vec<SpectrumRow>> {
    parse_spectrum(&std::fs::read_to_string(path)?)
}
