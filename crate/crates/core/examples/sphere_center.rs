//! FDTD spectrum at the center of a silver sphere, written as CSV and
//! compared with the bulk cell average.
//!
//! cargo run --release --example sphere_center -- out.csv

use ldos_kit::analytic::{cube_averaged_gf, vacuum_im_g};
use ldos_kit::output::write_spectrum;
use ldos_kit::scenario::{ScenarioConfig, ScenarioKind};
use ldos_kit::sweep::run_scenario;
use ldos_kit::{Frequency, Length, Medium};

fn main() -> ldos_kit::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "sphere_center.csv".into());
    let mut cfg = ScenarioConfig::new(ScenarioKind::Mnp {
        radius_nm: 20.0,
        medium: Medium::silver(),
        background: Medium::Vacuum,
    });
    cfg.grid.delta_nm = 4.0;
    cfg.grid.extent = None;
    cfg.source.z_over_a = Some(0.0);
    let cfg = ldos_kit::scenario::parse_config(&cfg.to_json())?;
    let out = run_scenario(&cfg)?;
    write_spectrum(path.as_ref(), &out.rows())?;
    let s = out.spectrum();
    let e = Frequency(s.peak_ev);
    let bulk = cube_averaged_gf(&Medium::silver(), e, Length(4.0))?.im / vacuum_im_g(e)?;
    println!(
        "peak {:.3e} at {:.2} eV (bulk cell average {:.3e}) -> {path}",
        s.peak_purcell, s.peak_ev, bulk
    );
    Ok(())
}
