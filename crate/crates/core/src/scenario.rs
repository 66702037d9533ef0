//! JSON scenario files.
//!
//! ```json
//! {
//!   "name": "mnp-outside",
//!   "scenario": { "type": "mnp", "radius_nm": 20 },
//!   "source": { "component": "y", "z_over_a": 1.2 },
//!   "grid": { "delta_nm": 2 }
//! }
//! ```
//!
//! Everything but `scenario` has defaults; [`parse_config`] fills them in
//! so printing a parsed config gives a complete, reproducible file.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analytic::{
    cube_averaged_gf, hom_gf_im, real_cavity_gf_center, scattered_gf, GreenSample, Orientation,
    SphereStack,
};
use crate::fdtd::{Axis, GridSpec, RunOptions, Scene, SourceSpec, SphereSpec, Waveform};
use crate::materials::Medium;
use crate::units::Frequency;
use crate::{Error, Result};

/// Interior cells per axis for scenes without a sphere.
pub const HOMOGENEOUS_EXTENT: usize = 60;
/// Vacuum padding, in cells, between a sphere (or source) and the PML.
pub const SPHERE_PADDING: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioKind {
    Vacuum,
    Homogeneous {
        #[serde(default = "Medium::silver")]
        medium: Medium,
    },
    Mnp {
        radius_nm: f64,
        #[serde(default = "Medium::silver")]
        medium: Medium,
        #[serde(default)]
        background: Medium,
    },
    /// Single-cell cavity at the source inside a homogeneous host.
    CavityHomog {
        #[serde(default = "Medium::silver")]
        medium: Medium,
        #[serde(default)]
        cavity_medium: Medium,
    },
    /// Single-cell cavity at the center of a sphere.
    CavityMnp {
        radius_nm: f64,
        #[serde(default = "Medium::silver")]
        medium: Medium,
        #[serde(default)]
        cavity_medium: Medium,
        #[serde(default)]
        background: Medium,
    },
}

impl ScenarioKind {
    pub fn radius_nm(&self) -> Option<f64> {
        match self {
            ScenarioKind::Mnp { radius_nm, .. } | ScenarioKind::CavityMnp { radius_nm, .. } => {
                Some(*radius_nm)
            }
            _ => None,
        }
    }

    /// Medium filling everything outside the sphere and cavity.
    pub fn background(&self) -> Medium {
        match self {
            ScenarioKind::Vacuum => Medium::Vacuum,
            ScenarioKind::Homogeneous { medium } | ScenarioKind::CavityHomog { medium, .. } => {
                *medium
            }
            ScenarioKind::Mnp { background, .. } | ScenarioKind::CavityMnp { background, .. } => {
                *background
            }
        }
    }
}

/// Source position on the z axis, given either in nm or in sphere radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    #[serde(default = "default_component")]
    pub component: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_over_a: Option<f64>,
    #[serde(default)]
    pub waveform: Waveform,
}

fn default_component() -> Axis {
    Axis::Y
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            component: Axis::Y,
            z_nm: None,
            z_over_a: None,
            waveform: Waveform::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_delta")]
    pub delta_nm: f64,
    /// Interior cells per axis; sized from the geometry when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<usize>,
    #[serde(default = "default_courant")]
    pub courant: f64,
    #[serde(default = "default_pml")]
    pub pml_cells: usize,
}

fn default_delta() -> f64 {
    GridSpec::default().delta_nm
}
fn default_courant() -> f64 {
    GridSpec::default().courant
}
fn default_pml() -> usize {
    GridSpec::default().pml_cells
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            delta_nm: default_delta(),
            extent: None,
            courant: default_courant(),
            pml_cells: default_pml(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrequencySpec {
    Linspace {
        start_ev: f64,
        stop_ev: f64,
        points: usize,
    },
    List(Vec<f64>),
}

impl Default for FrequencySpec {
    fn default() -> Self {
        FrequencySpec::Linspace {
            start_ev: 2.2,
            stop_ev: 3.5,
            points: 131,
        }
    }
}

impl FrequencySpec {
    pub fn energies(&self) -> Result<Vec<Frequency>> {
        let raw: Vec<f64> = match self {
            FrequencySpec::Linspace {
                start_ev,
                stop_ev,
                points,
            } => match *points {
                0 => vec![],
                1 => vec![*start_ev],
                p => (0..p)
                    .map(|i| start_ev + (stop_ev - start_ev) * i as f64 / (p - 1) as f64)
                    .collect(),
            },
            FrequencySpec::List(v) => v.clone(),
        };
        if raw.is_empty() {
            return Err(Error::Precondition("empty frequency list".into()));
        }
        raw.into_iter().map(Frequency::from_ev).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub frequencies: FrequencySpec,
    #[serde(default)]
    pub run: RunOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

/// Parameter lists for the sweep drivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_heights")]
    pub z_over_a: Vec<f64>,
    #[serde(default = "default_deltas")]
    pub delta_nm: Vec<f64>,
}

fn default_heights() -> Vec<f64> {
    (0..20).map(|i| (5 + 10 * i) as f64 / 100.0).collect()
}

fn default_deltas() -> Vec<f64> {
    vec![1.0, 2.0]
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            z_over_a: default_heights(),
            delta_nm: default_deltas(),
        }
    }
}

/// Everything an FDTD run needs, derived from a config.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub scene: Scene,
    pub grid: GridSpec,
    pub frequencies: Vec<Frequency>,
    pub options: RunOptions,
    /// Source height actually used (a whole number of cells), nm.
    pub z_nm: f64,
}

/// Parses and validates a JSON config, filling defaults. Schema errors
/// carry the JSON path of the offending field.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    cfg.fill_defaults();
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

impl ScenarioConfig {
    /// Minimal config of the given kind with all defaults.
    pub fn new(scenario: ScenarioKind) -> Self {
        let mut c = Self {
            name: String::new(),
            scenario,
            source: SourceConfig::default(),
            grid: GridConfig::default(),
            frequencies: FrequencySpec::default(),
            run: RunOptions::default(),
            output: None,
            sweep: None,
        };
        c.fill_defaults();
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Requested source height in nm.
    pub fn z_nm(&self) -> Result<f64> {
        match (self.source.z_nm, self.source.z_over_a) {
            (Some(_), Some(_)) => Err(config_err(
                "source",
                "give either z_nm or z_over_a, not both",
            )),
            (Some(z), None) => Ok(z),
            (None, Some(r)) => self
                .scenario
                .radius_nm()
                .map(|a| r * a)
                .ok_or_else(|| config_err("source.z_over_a", "scenario has no sphere radius")),
            (None, None) => Ok(0.0),
        }
    }

    fn fill_defaults(&mut self) {
        if self.grid.extent.is_none() {
            self.grid.extent = Some(self.default_extent());
        }
    }

    fn default_extent(&self) -> usize {
        match self.scenario.radius_nm() {
            Some(a) => {
                let reach = a.max(self.z_nm().unwrap_or(0.0).abs());
                let half = (reach / self.grid.delta_nm).ceil().max(1.0) as usize + SPHERE_PADDING;
                2 * half
            }
            None => HOMOGENEOUS_EXTENT,
        }
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            delta_nm: self.grid.delta_nm,
            extent: self.grid.extent.unwrap_or_else(|| self.default_extent()),
            courant: self.grid.courant,
            pml_cells: self.grid.pml_cells,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid_spec();
        grid.validate()
            .map_err(|e| config_err("grid", e.to_string()))?;
        self.scenario
            .background()
            .validate()
            .map_err(|e| config_err("scenario", e.to_string()))?;
        self.source
            .waveform
            .validate()
            .map_err(|e| config_err("source.waveform", e.to_string()))?;
        self.frequencies
            .energies()
            .map_err(|e| config_err("frequencies", e.to_string()))?;
        if !(self.run.decay > 0.0 && self.run.decay < 1.0) {
            return Err(config_err("run.decay", "must lie in (0, 1)"));
        }
        let z = self.z_nm()?;
        if !z.is_finite() {
            return Err(config_err("source", "non-finite height"));
        }
        let d = grid.delta_nm;
        match &self.scenario {
            ScenarioKind::Mnp { radius_nm, medium, .. } => {
                check_radius(*radius_nm)?;
                medium
                    .validate()
                    .map_err(|e| config_err("scenario.medium", e.to_string()))?;
                let snapped = (z / d).round() * d;
                for h in [z, snapped] {
                    if (h.abs() - radius_nm).abs() <= 0.5 * d {
                        return Err(config_err(
                            "source",
                            format!(
                                "source at |z| = {} nm is within half a cell of the sphere surface",
                                h.abs()
                            ),
                        ));
                    }
                }
            }
            ScenarioKind::CavityMnp { radius_nm, .. } => {
                check_radius(*radius_nm)?;
                if z != 0.0 {
                    return Err(config_err(
                        "source",
                        "the cavity sits at the sphere center; source height must be 0",
                    ));
                }
            }
            ScenarioKind::CavityHomog { .. } | ScenarioKind::Homogeneous { .. } | ScenarioKind::Vacuum => {
                if z != 0.0 {
                    return Err(config_err(
                        "source",
                        "homogeneous scenarios place the source at the center",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn plan(&self) -> Result<RunPlan> {
        self.validate()?;
        let grid = self.grid_spec();
        let z = self.z_nm()?;
        let offset = (z / grid.delta_nm).round() as i64;
        let (sphere, cavity) = match &self.scenario {
            ScenarioKind::Vacuum | ScenarioKind::Homogeneous { .. } => (None, None),
            ScenarioKind::Mnp {
                radius_nm, medium, ..
            } => (
                Some(SphereSpec {
                    radius_nm: *radius_nm,
                    medium: *medium,
                }),
                None,
            ),
            ScenarioKind::CavityHomog { cavity_medium, .. } => (None, Some(*cavity_medium)),
            ScenarioKind::CavityMnp {
                radius_nm,
                medium,
                cavity_medium,
                ..
            } => (
                Some(SphereSpec {
                    radius_nm: *radius_nm,
                    medium: *medium,
                }),
                Some(*cavity_medium),
            ),
        };
        Ok(RunPlan {
            scene: Scene {
                background: self.scenario.background(),
                sphere,
                cavity,
                source: SourceSpec {
                    component: self.source.component,
                    offset_cells: offset,
                    waveform: self.source.waveform,
                },
            },
            grid,
            frequencies: self.frequencies.energies()?,
            options: self.run,
            z_nm: offset as f64 * grid.delta_nm,
        })
    }

    /// Analytic counterpart of the FDTD observable, evaluated at the
    /// grid-snapped source height:
    ///
    /// * homogeneous scenes: the Green function averaged over one cell,
    /// * source outside a sphere: background plus multilayer scattering
    ///   (the real part of the background term is its cell average),
    /// * cavities: the real-cavity Green function of a sphere with the
    ///   cell's volume.
    pub fn analytic(&self) -> Result<Vec<GreenSample>> {
        let plan = self.plan()?;
        let d = plan.grid.delta();
        let orientation = match self.source.component {
            Axis::Z => Orientation::Radial,
            _ => Orientation::Tangential,
        };
        // Sphere with the volume of one cell.
        let r_cell = d.nm() * (3.0 / (4.0 * std::f64::consts::PI)).cbrt();
        plan.frequencies
            .iter()
            .map(|&f| match &self.scenario {
                ScenarioKind::Vacuum | ScenarioKind::Homogeneous { .. } => {
                    GreenSample::new(f, cube_averaged_gf(&self.scenario.background(), f, d)?)
                }
                ScenarioKind::Mnp {
                    radius_nm,
                    medium,
                    background,
                } => {
                    if plan.z_nm.abs() < *radius_nm {
                        return Err(Error::Precondition(
                            "no analytic reference for a source inside a lossy sphere".into(),
                        ));
                    }
                    let stack = SphereStack::sphere(
                        *radius_nm,
                        *medium,
                        *background,
                        plan.z_nm.abs(),
                        orientation,
                    )?;
                    let gs = scattered_gf(&stack, f)?;
                    let hom = Complex64::new(
                        cube_averaged_gf(background, f, d)?.re,
                        hom_gf_im(background, f)?,
                    );
                    GreenSample::new(f, hom + gs)
                }
                ScenarioKind::CavityHomog {
                    medium,
                    cavity_medium,
                } => {
                    let stack = SphereStack::new(
                        vec![r_cell],
                        vec![*cavity_medium, *medium],
                        0.0,
                        orientation,
                    )?;
                    real_cavity_gf_center(&stack, f)
                }
                ScenarioKind::CavityMnp {
                    radius_nm,
                    medium,
                    cavity_medium,
                    background,
                } => {
                    let stack = SphereStack::new(
                        vec![r_cell, *radius_nm],
                        vec![*cavity_medium, *medium, *background],
                        0.0,
                        orientation,
                    )?;
                    real_cavity_gf_center(&stack, f)
                }
            })
            .collect()
    }
}

fn check_radius(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(config_err("scenario.radius_nm", format!("must be > 0, got {a}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_vacuum_defaults() {
        let c = parse_config(r#"{"scenario": {"type": "vacuum"}}"#).unwrap();
        let g = c.grid_spec();
        assert_eq!(g.delta_nm, 2.0);
        assert!((g.courant - 0.5 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.pml_cells, 12);
        assert_eq!(g.extent, 60);
        let f = c.frequencies.energies().unwrap();
        assert_eq!(f.len(), 131);
        assert!((f[0].ev() - 2.2).abs() < 1e-12 && (f[130].ev() - 3.5).abs() < 1e-12);
        assert!((f[1].ev() - 2.21).abs() < 1e-12);
    }

    #[test]
    fn interface_guard() {
        let r = parse_config(
            r#"{"scenario": {"type": "mnp", "radius_nm": 20}, "source": {"z_over_a": 1.0}}"#,
        );
        assert!(matches!(r, Err(Error::Config { .. })));
        parse_config(r#"{"scenario": {"type": "mnp", "radius_nm": 20}, "source": {"z_over_a": 1.2}}"#)
            .unwrap();
    }

    #[test]
    fn errors_carry_the_field_path() {
        let r = parse_config(r#"{"scenario": {"type": "vacuum"}, "grid": {"delta_nm": "x"}}"#);
        match r {
            Err(Error::Config { path, .. }) => assert_eq!(path, "grid.delta_nm"),
            other => panic!("{other:?}"),
        }
        let r = parse_config(r#"{"scenario": {"type": "mnp"}}"#);
        assert!(matches!(r, Err(Error::Config { .. })));
    }

    #[test]
    fn round_trip() {
        let text = r#"{
            "name": "x",
            "scenario": {"type": "mnp", "radius_nm": 20,
                         "medium": {"drude": {"eps_inf": 6, "plasma_ev": 7.89, "damping_ev": 0.051}}},
            "source": {"component": "x", "z_over_a": 1.5},
            "grid": {"delta_nm": 1},
            "frequencies": [2.5, 3.0]
        }"#;
        let c = parse_config(text).unwrap();
        let again = parse_config(&c.to_json()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.hash(), again.hash());
        assert_eq!(c.grid.extent, Some(2 * (30 + SPHERE_PADDING)));
        let mut d = c.clone();
        d.grid.delta_nm = 2.0;
        assert_ne!(c.hash(), d.hash());
    }

    #[test]
    fn plan_snaps_source_to_cells() {
        let c = parse_config(
            r#"{"scenario": {"type": "mnp", "radius_nm": 20}, "source": {"z_over_a": 1.2}, "grid": {"delta_nm": 2}}"#,
        )
        .unwrap();
        let p = c.plan().unwrap();
        assert_eq!(p.scene.source.offset_cells, 12);
        assert_eq!(p.z_nm, 24.0);
    }

    #[test]
    fn analytic_vacuum_is_unity() {
        let c = ScenarioConfig::new(ScenarioKind::Vacuum);
        for s in c.analytic().unwrap() {
            assert!((s.purcell - 1.0).abs() < 2e-3);
        }
    }
}
