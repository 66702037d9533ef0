//! Cell-averaged Green function of bulk silver for two cell sizes.

use ldos_kit::analytic::{cube_averaged_gf, vacuum_im_g};
use ldos_kit::{Frequency, Length, Medium};

fn main() -> ldos_kit::Result<()> {
    let ag = Medium::silver();
    println!("energy_ev  purcell(1 nm)  purcell(2 nm)");
    for i in 0..=13 {
        let e = Frequency(2.2 + 0.1 * i as f64);
        let norm = vacuum_im_g(e)?;
        let p1 = cube_averaged_gf(&ag, e, Length(1.0))?.im / norm;
        let p2 = cube_averaged_gf(&ag, e, Length(2.0))?.im / norm;
        println!("{:9.2}  {p1:13.4e}  {p2:13.4e}", e.ev());
    }
    Ok(())
}
