//! Analytic columns of a height sweep, printed as CSV.

use ldos_kit::scenario::parse_config;
use ldos_kit::sweep::{format_heights, sweep_height};

fn main() -> ldos_kit::Result<()> {
    let cfg = parse_config(r#"{"scenario": {"type": "mnp", "radius_nm": 20}, "source": {"z_over_a": 1.5}}"#)?;
    let heights: Vec<f64> = (0..10).map(|i| 1.1 + 0.1 * i as f64).collect();
    print!("{}", format_heights(&sweep_height(&cfg, &heights, false, None)?));
    Ok(())
}
