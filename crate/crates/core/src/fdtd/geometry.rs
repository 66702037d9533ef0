//! Staircased material assignment on Yee edges.

use serde::{Deserialize, Serialize};

use super::{Axis, GridSpec, SourceSpec};
use crate::materials::Medium;
use crate::{Error, Result};

/// Smallest sphere radius, in cells, that is treated as resolved.
pub const MIN_SPHERE_CELLS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSpec {
    pub radius_nm: f64,
    pub medium: Medium,
}

/// Physical content of a run, independent of discretization details.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scene {
    /// Fills every cell not otherwise assigned, PML included.
    pub background: Medium,
    /// Centered on the source edge (before its z offset).
    pub sphere: Option<SphereSpec>,
    /// Medium of a single-edge cavity at the source edge.
    pub cavity: Option<Medium>,
    pub source: SourceSpec,
}

/// How the simulated region meets a mirror plane through the source axis.
///
/// Every scene is symmetric under `x → -x` and `y → -y` about the source
/// edge, so only one quadrant needs to be stepped. A plane through nodes
/// (`Node`) is a magnetic wall: tangential H is odd across it. A plane
/// through edge midpoints (`Half`, along the source component) is an
/// electric wall: tangential E is odd across it. Local index 0 along a
/// mirrored axis is an image layer that the engine refills every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    None,
    Node,
    Half,
}

/// Per-edge material ids plus the id → medium table.
#[derive(Debug, Clone)]
pub struct Geometry {
    /// Nodes per axis of the simulated region.
    pub dims: [usize; 3],
    /// Global node index of local node 0 along each axis.
    pub offset: [usize; 3],
    pub planes: [Plane; 3],
    pub media: Vec<Medium>,
    /// `ids[c][idx]` is the medium of the c-directed edge at `idx`.
    pub ids: [Vec<u8>; 3],
    pub source_component: Axis,
    /// Local node triple of the source edge.
    pub source_node: [usize; 3],
    pub source_index: usize,
    /// Sphere center in global node units (fractional along the source axis).
    pub center: [f64; 3],
}

impl Geometry {
    pub fn flat(&self, node: [usize; 3]) -> usize {
        (node[0] * self.dims[1] + node[1]) * self.dims[2] + node[2]
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    /// Number of `c`-directed edges carrying medium id `id`.
    pub fn count(&self, c: Axis, id: u8) -> usize {
        self.ids[c.index()].iter().filter(|&&m| m == id).count()
    }
}

/// Assigns media to every E edge: an edge takes the sphere medium iff its
/// midpoint lies strictly inside the sphere; a cavity replaces only the
/// source edge. With `mirror` only the quadrant `x, y ≥` source is kept.
pub fn build_geometry(scene: &Scene, grid: &GridSpec, mirror: bool) -> Result<Geometry> {
    grid.validate()?;
    scene.background.validate()?;
    let cells = grid.cells();
    let n = grid.nodes();
    let c = cells / 2;
    let half_extent = (grid.extent / 2) as i64;
    let m = scene.source.offset_cells;
    if m.abs() >= half_extent - 1 {
        return Err(Error::Geometry(format!(
            "source offset {m} cells leaves the {} cell interior",
            grid.extent
        )));
    }
    let comp = scene.source.component;
    let mut planes = [Plane::None; 3];
    let mut offset = [0; 3];
    if mirror {
        for a in 0..2 {
            planes[a] = if comp.index() == a { Plane::Half } else { Plane::Node };
            offset[a] = if comp.index() == a { c } else { c - 1 };
        }
    }
    let dims = [n - offset[0], n - offset[1], n - offset[2]];
    let size = dims.iter().product();
    let global_source = [c, c, (c as i64 + m) as usize];
    let source_node = [
        global_source[0] - offset[0],
        global_source[1] - offset[1],
        global_source[2],
    ];
    let mut center = [c as f64; 3];
    center[comp.index()] += 0.5;

    let mut media = vec![scene.background];
    let mut ids = [vec![0u8; size], vec![0u8; size], vec![0u8; size]];

    if let Some(sphere) = scene.sphere.filter(|s| s.radius_nm > 0.0) {
        sphere.medium.validate()?;
        let r = sphere.radius_nm / grid.delta_nm;
        if r < MIN_SPHERE_CELLS {
            return Err(Error::Geometry(format!(
                "sphere radius {:.2} cells is below {MIN_SPHERE_CELLS}",
                r
            )));
        }
        if r + 1.0 > half_extent as f64 {
            return Err(Error::Geometry(format!(
                "sphere radius {r:.1} cells does not fit the {} cell interior",
                grid.extent
            )));
        }
        media.push(sphere.medium);
        let id = (media.len() - 1) as u8;
        // local index range covering the sphere along axis a
        let span = |a: usize| {
            let x = center[a] - offset[a] as f64;
            let lo = (x - r).floor().max(0.0) as usize;
            let hi = ((x + r).ceil().max(0.0) as usize).min(dims[a] - 1);
            lo..=hi
        };
        for axis in Axis::ALL {
            let mut shift = [0.0; 3];
            shift[axis.index()] = 0.5;
            let field = &mut ids[axis.index()];
            let pos = |a: usize, l: usize| (l + offset[a]) as f64 + shift[a] - center[a];
            for i in span(0) {
                let dx = pos(0, i);
                for j in span(1) {
                    let dy = pos(1, j);
                    for k in span(2) {
                        let dz = pos(2, k);
                        if dx * dx + dy * dy + dz * dz < r * r {
                            field[(i * dims[1] + j) * dims[2] + k] = id;
                        }
                    }
                }
            }
        }
    }

    let source_index = (source_node[0] * dims[1] + source_node[1]) * dims[2] + source_node[2];
    if let Some(cav) = scene.cavity {
        cav.validate()?;
        media.push(cav);
        ids[comp.index()][source_index] = (media.len() - 1) as u8;
    }

    Ok(Geometry {
        dims,
        offset,
        planes,
        media,
        ids,
        source_component: comp,
        source_node,
        source_index,
        center,
    })
}
