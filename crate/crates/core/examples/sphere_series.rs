//! Purcell factor next to a 20 nm silver sphere from the multipole series.

use ldos_kit::analytic::{scattered_gf_term, total_ldos_outside, vacuum_im_g, Orientation, SphereStack};
use ldos_kit::{Frequency, Medium};

fn main() -> ldos_kit::Result<()> {
    for zr in [1.2, 1.5, 2.0] {
        let st = SphereStack::sphere(20.0, Medium::silver(), Medium::Vacuum, 20.0 * zr, Orientation::Tangential)?;
        let mut best = (0.0, 0.0, 0.0);
        for i in 0..=130 {
            let e = Frequency(2.2 + 0.01 * i as f64);
            let total = total_ldos_outside(&st, e)?;
            let dipole = scattered_gf_term(&st, e, 1)?.im / vacuum_im_g(e)?;
            if total > best.1 {
                best = (e.ev(), total, dipole);
            }
        }
        println!(
            "z/a = {zr}: peak {:.3e} at {:.2} eV (dipole term there {:.3e})",
            best.1, best.0, best.2
        );
    }
    Ok(())
}
