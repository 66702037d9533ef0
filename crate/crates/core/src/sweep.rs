//! Single runs and parameter sweeps driven by a [`ScenarioConfig`].

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::GreenSample;
use crate::compare::{compare_values, CompareReport};
use crate::fdtd::{run, RunRecord, Termination};
use crate::green::{extract_run, purcell_spectrum, PurcellSpectrum};
use crate::output::{analytic_rows, fdtd_rows, sci, write_atomic, write_spectrum, SpectrumRow};
use crate::scenario::{RunPlan, ScenarioConfig};
use crate::{Error, Result, VERSION};

#[derive(Debug, Clone)]
pub struct FdtdOutcome {
    pub plan: RunPlan,
    pub record: RunRecord,
    pub samples: Vec<GreenSample>,
    pub hash: String,
}

impl FdtdOutcome {
    pub fn rows(&self) -> Vec<SpectrumRow> {
        fdtd_rows(&self.samples, &self.record, &self.hash)
    }

    pub fn spectrum(&self) -> PurcellSpectrum {
        purcell_spectrum(&self.samples).expect("runs have at least one frequency")
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<FdtdOutcome> {
    let plan = cfg.plan()?;
    let e_max = plan
        .frequencies
        .iter()
        .copied()
        .max_by(|a, b| a.ev().total_cmp(&b.ev()))
        .expect("validated non-empty");
    plan.grid.check_resolution(&plan.scene.background, e_max)?;
    let record = run(&plan.scene, &plan.grid, &plan.frequencies, &plan.options)?;
    let samples = extract_run(&record)?;
    Ok(FdtdOutcome {
        plan,
        record,
        samples,
        hash: cfg.hash(),
    })
}

pub fn analytic_scenario(cfg: &ScenarioConfig) -> Result<Vec<SpectrumRow>> {
    let samples = cfg.analytic()?;
    Ok(analytic_rows(&samples, &cfg.hash(), cfg.grid.delta_nm))
}

/// Copy of `base` with the source at `z_over_a` and the interior sized
/// for the largest height of the sweep, so every run shares one domain.
pub fn height_config(base: &ScenarioConfig, z_over_a: f64, max_z_over_a: f64) -> Result<ScenarioConfig> {
    base.scenario
        .radius_nm()
        .ok_or_else(|| Error::Precondition("height sweeps need a sphere".into()))?;
    let mut sized = base.clone();
    sized.source.z_nm = None;
    sized.source.z_over_a = Some(max_z_over_a.max(1.0));
    sized.grid.extent = None;
    let extent = crate::scenario::parse_config(&sized.to_json())?.grid.extent;
    let mut cfg = base.clone();
    cfg.source.z_nm = None;
    cfg.source.z_over_a = Some(z_over_a);
    cfg.grid.extent = extent;
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct HeightPoint {
    pub z_over_a: f64,
    /// Grid-snapped height.
    pub z_nm: f64,
    pub peak_ev: f64,
    pub peak_purcell: f64,
    /// Analytic peak; NaN inside the sphere.
    pub analytic_peak_ev: f64,
    pub analytic_peak_purcell: f64,
    pub scenario_hash: String,
    pub delta_nm: f64,
    pub steps: usize,
    pub residual: f64,
    pub flag: String,
}

impl HeightPoint {
    fn skipped(z_over_a: f64, delta_nm: f64, flag: &str) -> Self {
        Self {
            z_over_a,
            z_nm: f64::NAN,
            peak_ev: f64::NAN,
            peak_purcell: f64::NAN,
            analytic_peak_ev: f64::NAN,
            analytic_peak_purcell: f64::NAN,
            scenario_hash: String::new(),
            delta_nm,
            steps: 0,
            residual: f64::NAN,
            flag: flag.into(),
        }
    }
}

fn analytic_peak(cfg: &ScenarioConfig) -> (f64, f64) {
    match cfg.analytic().and_then(|s| purcell_spectrum(&s)) {
        Ok(s) => (s.peak_ev, s.peak_purcell),
        Err(_) => (f64::NAN, f64::NAN),
    }
}

/// Peak Purcell factor versus source height. Heights that land within
/// half a cell of the surface are reported with `flag = interface`.
/// With `fdtd = false` only the analytic columns are filled.
pub fn sweep_height(
    base: &ScenarioConfig,
    heights: &[f64],
    fdtd: bool,
    spectra_dir: Option<&Path>,
) -> Result<Vec<HeightPoint>> {
    let max_h = heights.iter().copied().fold(0.0, f64::max);
    heights
        .par_iter()
        .map(|&h| {
            let cfg = match height_config(base, h, max_h) {
                Ok(c) => c,
                Err(Error::Config { .. }) => {
                    return Ok(HeightPoint::skipped(h, base.grid.delta_nm, "interface"))
                }
                Err(e) => return Err(e),
            };
            let plan = cfg.plan()?;
            let (an_ev, an_peak) = analytic_peak(&cfg);
            let mut point = HeightPoint {
                z_over_a: h,
                z_nm: plan.z_nm,
                analytic_peak_ev: an_ev,
                analytic_peak_purcell: an_peak,
                scenario_hash: cfg.hash(),
                flag: "analytic".into(),
                ..HeightPoint::skipped(h, cfg.grid.delta_nm, "")
            };
            if fdtd {
                let out = run_scenario(&cfg)?;
                if let Some(dir) = spectra_dir {
                    write_spectrum(&dir.join(format!("z_over_a_{h:.3}.csv")), &out.rows())?;
                }
                let s = out.spectrum();
                point.peak_ev = s.peak_ev;
                point.peak_purcell = s.peak_purcell;
                point.steps = out.record.steps;
                point.residual = out.record.residual;
                point.flag = termination_flag(out.record.termination).into();
            }
            Ok(point)
        })
        .collect()
}

pub fn termination_flag(t: Termination) -> &'static str {
    match t {
        Termination::Decayed => "decayed",
        Termination::MaxSteps => "max_steps",
    }
}

pub const HEIGHT_COLUMNS: &str = "z_over_a,z_nm,peak_ev,peak_purcell,analytic_peak_ev,analytic_peak_purcell,scenario_hash,delta_nm,steps,residual,flag";

pub fn format_heights(points: &[HeightPoint]) -> String {
    let mut out = format!("# ldos-kit v{VERSION}\n{HEIGHT_COLUMNS}\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            sci(p.z_over_a),
            sci(p.z_nm),
            sci(p.peak_ev),
            sci(p.peak_purcell),
            sci(p.analytic_peak_ev),
            sci(p.analytic_peak_purcell),
            p.scenario_hash,
            sci(p.delta_nm),
            p.steps,
            sci(p.residual),
            p.flag
        ));
    }
    out
}

pub fn write_heights(path: &Path, points: &[HeightPoint]) -> Result<()> {
    write_atomic(path, &format_heights(points))
}

/// Copy of `base` at cell size `delta_nm` covering the same physical
/// interior (rounded to an even cell count).
pub fn grid_config(base: &ScenarioConfig, delta_nm: f64) -> Result<ScenarioConfig> {
    let g = base.grid_spec();
    let length = g.extent as f64 * g.delta_nm;
    let half = (0.5 * length / delta_nm).round().max(2.0) as usize;
    let mut cfg = base.clone();
    cfg.grid.delta_nm = delta_nm;
    cfg.grid.extent = Some(2 * half);
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone)]
pub struct GridRun {
    pub delta_nm: f64,
    pub outcome: FdtdOutcome,
}

/// Runs `base` at every cell size in `deltas`.
pub fn sweep_grid(base: &ScenarioConfig, deltas: &[f64]) -> Result<Vec<GridRun>> {
    deltas
        .par_iter()
        .map(|&d| {
            let cfg = grid_config(base, d)?;
            Ok(GridRun {
                delta_nm: d,
                outcome: run_scenario(&cfg)?,
            })
        })
        .collect()
}

/// Purcell deviation of run `a` against run `b`.
pub fn compare_runs(a: &FdtdOutcome, b: &FdtdOutcome, tol: f64) -> Result<CompareReport> {
    let pairs = paired(&a.samples, &b.samples)?;
    compare_values(&pairs, tol)
}

/// `(energy, value, reference)` for two sample sets on the same grid.
pub fn paired(a: &[GreenSample], b: &[GreenSample]) -> Result<Vec<(f64, f64, f64)>> {
    if a.len() != b.len() {
        return Err(Error::MismatchedGrids(format!("{} vs {} samples", a.len(), b.len())));
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if (x.energy_ev - y.energy_ev).abs() > crate::compare::ENERGY_MATCH_EV {
                Err(Error::MismatchedGrids(format!(
                    "{} eV vs {} eV",
                    x.energy_ev, y.energy_ev
                )))
            } else {
                Ok((x.energy_ev, x.purcell, y.purcell))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_config;

    fn mnp() -> ScenarioConfig {
        parse_config(r#"{"scenario": {"type": "mnp", "radius_nm": 20}, "source": {"z_over_a": 1.2}}"#)
            .unwrap()
    }

    #[test]
    fn heights_share_one_domain() {
        let base = mnp();
        let a = height_config(&base, 0.05, 1.95).unwrap();
        let b = height_config(&base, 1.95, 1.95).unwrap();
        assert_eq!(a.grid.extent, b.grid.extent);
        assert!(matches!(height_config(&base, 0.95, 1.95), Err(Error::Config { .. })));
    }

    #[test]
    fn analytic_height_sweep_decays_outside() {
        let pts = sweep_height(&mnp(), &[0.5, 0.95, 1.2, 1.6, 2.0], false, None).unwrap();
        assert_eq!(pts[1].flag, "interface");
        assert!(pts[0].analytic_peak_purcell.is_nan());
        assert!(pts[2].analytic_peak_purcell > pts[3].analytic_peak_purcell);
        assert!(pts[3].analytic_peak_purcell > pts[4].analytic_peak_purcell);
        let text = format_heights(&pts);
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn grid_configs_keep_the_physical_extent() {
        let base = mnp();
        let two = grid_config(&base, 2.0).unwrap();
        let one = grid_config(&base, 1.0).unwrap();
        let len = |c: &ScenarioConfig| c.grid.extent.unwrap() as f64 * c.grid.delta_nm;
        assert_eq!(len(&two), len(&one));
    }
}
