//! FDTD self-field of a dipole in vacuum; every Purcell factor should be 1.
//!
//! cargo run --release --example vacuum_calibration

use ldos_kit::scenario::{ScenarioConfig, ScenarioKind};
use ldos_kit::sweep::run_scenario;

fn main() -> ldos_kit::Result<()> {
    let mut cfg = ScenarioConfig::new(ScenarioKind::Vacuum);
    cfg.grid.delta_nm = 4.0;
    cfg.grid.extent = Some(30);
    let out = run_scenario(&cfg)?;
    let worst = out
        .samples
        .iter()
        .map(|s| (s.purcell - 1.0).abs())
        .fold(0.0, f64::max);
    println!("{} steps, max |P - 1| = {worst:.2e}", out.record.steps);
    Ok(())
}
