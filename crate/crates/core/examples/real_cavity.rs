//! Local-field Purcell factor at the center of a cell-sized cavity in silver.

use ldos_kit::analytic::{real_cavity_gf_center, Orientation, SphereStack};
use ldos_kit::{Frequency, Medium};

fn main() -> ldos_kit::Result<()> {
    let r = (3.0 / (4.0 * std::f64::consts::PI)).cbrt();
    for core in [Medium::Vacuum, Medium::Dielectric { eps: 12.0 }] {
        let st = SphereStack::new(vec![r], vec![core, Medium::silver()], 0.0, Orientation::Tangential)?;
        let mut best = (0.0, 0.0);
        for i in 0..=1300 {
            let e = Frequency(2.2 + 0.001 * i as f64);
            let p = real_cavity_gf_center(&st, e)?.purcell;
            if p > best.1 {
                best = (e.ev(), p);
            }
        }
        println!("{core:?}: resonance {:.3} eV, Purcell {:.3e}", best.0, best.1);
    }
    Ok(())
}
