use num_complex::Complex64;
use proptest::prelude::*;

use ldos_kit::analytic::{
    cube_averaged_gf, scattered_gf, total_ldos_outside, vacuum_im_g, Orientation, SphereStack,
};
use ldos_kit::compare::compare_values;
use ldos_kit::output::{format_spectrum, parse_spectrum, SpectrumRow};
use ldos_kit::scenario::{parse_config, ScenarioConfig, ScenarioKind};
use ldos_kit::{DrudeModel, Frequency, GreenSample, Length, Medium};

fn drude() -> impl Strategy<Value = Medium> {
    (1.0f64..10.0, 2.0f64..10.0, 0.01f64..0.5).prop_map(|(eps_inf, plasma_ev, damping_ev)| {
        Medium::Drude(DrudeModel {
            eps_inf,
            plasma_ev,
            damping_ev,
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cube_average_is_passive(m in drude(), e in 1.5f64..4.0, d in 0.5f64..4.0) {
        let g = cube_averaged_gf(&m, Frequency(e), Length(d)).unwrap();
        prop_assert!(g.im > 0.0);
    }

    #[test]
    fn dielectric_cube_average_matches_point_value(eps in 1.0f64..16.0, e in 1.5f64..4.0) {
        let m = Medium::Dielectric { eps };
        let g = cube_averaged_gf(&m, Frequency(e), Length(0.5)).unwrap();
        let rho = g.im / vacuum_im_g(Frequency(e)).unwrap();
        prop_assert!((rho / eps.sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn equal_media_do_not_scatter(eps in 1.0f64..12.0, a in 5.0f64..30.0, zr in 1.05f64..3.0, e in 2.0f64..3.5) {
        let m = Medium::Dielectric { eps };
        let st = SphereStack::sphere(a, m, m, a * zr, Orientation::Tangential).unwrap();
        prop_assert_eq!(scattered_gf(&st, Frequency(e)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn emission_outside_a_lossy_sphere_is_enhanced_or_passive(m in drude(), zr in 1.1f64..3.0, e in 2.0f64..3.5) {
        for o in [Orientation::Tangential, Orientation::Radial] {
            let st = SphereStack::sphere(20.0, m, Medium::Vacuum, 20.0 * zr, o).unwrap();
            prop_assert!(total_ldos_outside(&st, Frequency(e)).unwrap() > 0.0);
        }
    }

    #[test]
    fn purcell_is_the_vacuum_normalized_im_part(e in 1.0f64..5.0, scale in 0.1f64..1e3) {
        let g = Complex64::new(-3.0, scale * vacuum_im_g(Frequency(e)).unwrap());
        let s = GreenSample::new(Frequency(e), g).unwrap();
        prop_assert!((s.purcell - scale).abs() <= 1e-12 * scale);
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec((1.0f64..5.0, -1e30f64..1e30, 0.0f64..1e30, 0usize..1_000_000), 1..20)) {
        let rows: Vec<SpectrumRow> = values.iter().map(|&(e, re, im, steps)| SpectrumRow {
            energy_ev: e,
            g: Complex64::new(re, im),
            purcell: im * 1e-20,
            scenario_hash: "abcdef0123456789".into(),
            delta_nm: 2.0,
            steps,
            residual: 1e-7,
            flag: "decayed".into(),
        }).collect();
        let text = format_spectrum(&rows);
        let back = parse_spectrum(&text).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (a, b) in back.iter().zip(&rows) {
            prop_assert!((a.g.re - b.g.re).abs() <= 1e-8 * b.g.re.abs());
            prop_assert_eq!(a.steps, b.steps);
        }
        prop_assert_eq!(format_spectrum(&back), text);
    }

    #[test]
    fn config_round_trip(delta in prop::sample::select(vec![0.5, 1.0, 2.0, 4.0]), zr in 1.3f64..2.0, radius in 10.0f64..30.0) {
        let mut c = ScenarioConfig::new(ScenarioKind::Mnp {
            radius_nm: radius,
            medium: Medium::silver(),
            background: Medium::Vacuum,
        });
        c.grid.delta_nm = delta;
        c.grid.extent = None;
        c.source.z_over_a = Some(zr);
        let c = parse_config(&c.to_json()).unwrap();
        let back = parse_config(&c.to_json()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.hash(), c.hash());
    }

    #[test]
    fn a_spectrum_matches_itself(v in prop::collection::vec(1e-3f64..1e8, 1..50)) {
        let pairs: Vec<_> = v.iter().enumerate().map(|(i, &x)| (i as f64, x, x)).collect();
        let r = compare_values(&pairs, 0.0).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.max_rel, 0.0);
    }
}
