//! Yee-grid FDTD engine.
//!
//! Lattice: `n` nodes per axis, node `(i, j, k)` at `(iΔ, jΔ, kΔ)`.
//!
//! ```text
//! Ex[i,j,k] at (i+½, j,   k  )    Hx[i,j,k] at (i,   j+½, k+½)
//! Ey[i,j,k] at (i,   j+½, k  )    Hy[i,j,k] at (i+½, j,   k+½)
//! Ez[i,j,k] at (i,   j,   k+½)    Hz[i,j,k] at (i+½, j+½, k  )
//! ```
//!
//! Arrays are flat, `idx = (i n_y + j) n_z + k`. The outer faces are PEC
//! and the outermost `pml_cells` layers carry a CFS-CPML. Runs normally
//! step one quadrant, using the mirror symmetry of every scene about the
//! source axis (see [`Plane`]). `E` lives at integer
//! steps `nΔt`, `H` and all currents at half steps.

mod cpml;
pub mod dump;
mod engine;
pub mod geometry;
pub mod monitor;
mod run;
pub mod source;

use serde::{Deserialize, Serialize};

use crate::materials::{refractive_index, Medium};
use crate::units::{wavelength_nm, Frequency, Length, C0};
use crate::{Error, Result};

pub use engine::{EdgeCoeffs, YeeState};
pub use geometry::{build_geometry, Geometry, Plane, Scene, SphereSpec};
pub use monitor::DftMonitor;
pub use run::{run, RunOptions, RunRecord, Termination};
pub use source::{SourceSpec, Waveform};

/// Largest Courant number accepted, a margin below the 3D limit `1/√3`.
pub const MAX_COURANT: f64 = 0.99 / SQRT3;
const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Uniform cubic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Cell edge Δ in nm.
    pub delta_nm: f64,
    /// Cells per axis between the PML slabs.
    pub extent: usize,
    /// `c Δt / Δ`.
    pub courant: f64,
    pub pml_cells: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            delta_nm: 2.0,
            extent: 60,
            courant: 0.5 / SQRT3,
            pml_cells: 12,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_nm.is_finite() && self.delta_nm > 0.0) {
            return Err(Error::InvalidGrid(format!("delta_nm = {}", self.delta_nm)));
        }
        if !(self.courant > 0.0 && self.courant <= MAX_COURANT) {
            return Err(Error::InvalidGrid(format!(
                "courant {} outside (0, 0.99/sqrt(3)]",
                self.courant
            )));
        }
        if self.extent < 4 {
            return Err(Error::InvalidGrid(format!("extent {} < 4 cells", self.extent)));
        }
        if self.extent % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "extent {} must be even so the source sits at the center",
                self.extent
            )));
        }
        if self.pml_cells == 0 {
            return Err(Error::InvalidGrid("at least one PML cell is required".into()));
        }
        Ok(())
    }

    pub fn delta(&self) -> Length {
        Length(self.delta_nm)
    }

    /// Time step in seconds.
    pub fn dt(&self) -> f64 {
        self.courant * self.delta_nm * 1e-9 / C0
    }

    /// Cells per axis including both PML slabs.
    pub fn cells(&self) -> usize {
        self.extent + 2 * self.pml_cells
    }

    /// Nodes per axis.
    pub fn nodes(&self) -> usize {
        self.cells() + 1
    }

    /// Requires at least 20 cells per wavelength in `background` at `e_max`.
    pub fn check_resolution(&self, background: &Medium, e_max: Frequency) -> Result<()> {
        let n = refractive_index(background, e_max)?.norm().max(1e-12);
        let lambda = wavelength_nm(e_max)? / n;
        if lambda < 20.0 * self.delta_nm {
            return Err(Error::InvalidGrid(format!(
                "{:.1} cells per wavelength at {} eV, need >= 20",
                lambda / self.delta_nm,
                e_max.ev()
            )));
        }
        Ok(())
    }
}
