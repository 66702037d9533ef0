//! Time stepping until the source-edge field has rung down.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_geometry, Axis, DftMonitor, GridSpec, Scene, YeeState};
use crate::units::Frequency;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunOptions {
    pub max_steps: usize,
    /// Stop once a full envelope window stays below this fraction of the
    /// peak source-edge field.
    pub decay: f64,
    /// Step one quadrant and rebuild the rest by symmetry.
    pub mirror: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            max_steps: 2_000_000,
            decay: 1e-7,
            mirror: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Decayed,
    MaxSteps,
}

/// Raw self-field record of one run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub frequencies: Vec<Frequency>,
    /// DFT of the source-edge field, V·s/m.
    pub e_src: Vec<Complex64>,
    /// DFT of the injected current density, A·s/m².
    pub j_src: Vec<Complex64>,
    pub delta_nm: f64,
    pub component: Axis,
    pub dt: f64,
    pub steps: usize,
    /// Envelope of the last window relative to the peak.
    pub residual: f64,
    pub termination: Termination,
}

/// Runs a scene to ring-down and returns the source-edge spectra.
pub fn run(
    scene: &Scene,
    grid: &GridSpec,
    frequencies: &[Frequency],
    opts: &RunOptions,
) -> Result<RunRecord> {
    if frequencies.is_empty() {
        return Err(Error::Precondition("no frequencies requested".into()));
    }
    let geometry = build_geometry(scene, grid, opts.mirror)?;
    let mut state = YeeState::new(&geometry, grid)?;
    let dt = state.dt();
    let pulse = scene.source.waveform.sampled(dt)?;
    pulse.check_band(frequencies)?;
    let mut monitor = DftMonitor::new(frequencies, dt)?;

    let omega_min = frequencies
        .iter()
        .map(|f| f.omega())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let window = ((2.0 * std::f64::consts::PI / omega_min / dt).ceil() as usize).max(16);

    let mut peak = 0.0f64;
    let mut block_max = 0.0f64;
    let mut residual = f64::INFINITY;
    let mut termination = Termination::MaxSteps;
    while state.steps() < opts.max_steps {
        let n = state.steps();
        let j = pulse.current(n);
        monitor.add_current(n, j);
        state.step(j)?;
        let e = state.source_field();
        monitor.add_field(n + 1, e);
        peak = peak.max(e.abs());
        block_max = block_max.max(e.abs());
        if (n + 1) % window == 0 {
            if peak > 0.0 {
                residual = block_max / peak;
            }
            if n > pulse.last_step() && residual < opts.decay {
                termination = Termination::Decayed;
                break;
            }
            block_max = 0.0;
        }
    }
    Ok(RunRecord {
        frequencies: frequencies.to_vec(),
        e_src: monitor.e,
        j_src: monitor.j,
        delta_nm: grid.delta_nm,
        component: scene.source.component,
        dt,
        steps: state.steps(),
        residual,
        termination,
    })
}
