//! A mirrored quadrant must reproduce the full-domain source field.

use ldos_kit::fdtd::{build_geometry, Axis, GridSpec, Scene, SourceSpec, SphereSpec, Waveform, YeeState};
use ldos_kit::materials::Medium;

fn history(component: Axis, offset: i64, mirror: bool, steps: usize) -> Vec<f64> {
    let grid = GridSpec {
        delta_nm: 2.0,
        extent: 20,
        courant: 0.99 / 3f64.sqrt(),
        pml_cells: 6,
    };
    let scene = Scene {
        background: Medium::Vacuum,
        sphere: Some(SphereSpec {
            radius_nm: 10.0,
            medium: Medium::silver(),
        }),
        cavity: None,
        source: SourceSpec {
            component,
            offset_cells: offset,
            waveform: Waveform::default(),
        },
    };
    let g = build_geometry(&scene, &grid, mirror).unwrap();
    let mut s = YeeState::new(&g, &grid).unwrap();
    let pulse = scene.source.waveform.sampled(s.dt()).unwrap();
    (0..steps)
        .map(|n| {
            s.step(pulse.current(n)).unwrap();
            s.source_field()
        })
        .collect()
}

fn worst(component: Axis, offset: i64) -> f64 {
    let full = history(component, offset, false, 1500);
    let quad = history(component, offset, true, 1500);
    let scale = full.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(scale > 0.0);
    full.iter()
        .zip(&quad)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}

/// A radial source has both mirror planes on nodes, where the full box is
/// itself symmetric: the quadrant is exact up to round-off.
#[test]
fn radial_source_quadrant_is_exact() {
    for offset in [0, 7, -4] {
        let w = worst(Axis::Z, offset);
        assert!(w < 1e-12, "{offset}: {w:e}");
    }
}

/// For tangential sources the electric wall sits half a cell off the box
/// center, so the far PML moves by half a cell; the difference stays tiny.
#[test]
fn tangential_source_quadrant_matches() {
    for (component, offset) in [(Axis::Y, 7), (Axis::X, -7), (Axis::Y, 0)] {
        let w = worst(component, offset);
        assert!(w < 1e-6, "{component:?} {offset}: {w:e}");
    }
}
