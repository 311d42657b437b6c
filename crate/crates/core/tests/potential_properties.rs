use std::sync::OnceLock;

use fekete_dyn::potential::{capacity_estimate, green_eval, CompactSetModel};
use fekete_dyn::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn catalog() -> &'static [CompactSetModel] {
    static SETS: OnceLock<Vec<CompactSetModel>> = OnceLock::new();
    SETS.get_or_init(|| {
        vec![
            CompactSetModel::interval(-2.0, 2.0).unwrap(),
            CompactSetModel::interval(0.5, 1.5).unwrap(),
            CompactSetModel::disk(c(1.0, -0.5), 0.75).unwrap(),
            CompactSetModel::circle(c(0.0, 0.0), 1.0).unwrap(),
            CompactSetModel::interval_union(vec![(-2.0, -1.0), (1.0, 2.0)]).unwrap(),
            CompactSetModel::polyline(vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)])
                .unwrap(),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn green_is_log_minus_log_capacity_far_away(t in 0.0f64..std::f64::consts::TAU, s in 1.0f64..10.0) {
        // off-center sets carry a dipole term Re(c/z) that this radius does not suppress
        for e in catalog().iter().filter(|e| e.center().norm() < 1e-12) {
            let r = s * (2.0 * e.diameter() + e.center().norm());
            let z = Complex64::from_polar(r, t);
            let g = green_eval(e, z);
            prop_assert!((g - (z.norm().ln() - e.log_capacity())).abs() <= 0.02, "{} at {z}: {g}", e.kind().name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn green_is_nonnegative_and_conjugation_symmetric(re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let z = c(re, im);
        for e in catalog() {
            let g = green_eval(e, z);
            prop_assert!(g >= 0.0);
            if e.symmetric() {
                prop_assert!((g - green_eval(e, z.conj())).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn green_vanishes_on_the_hull() {
    for e in catalog() {
        for &z in e.hull_samples() {
            assert_eq!(green_eval(e, z), 0.0, "{} at {z}", e.kind().name());
        }
    }
}

#[test]
fn transfinite_diameters_decrease() {
    for e in catalog() {
        let mut last = f64::INFINITY;
        for n in [4, 8, 16, 32, 64] {
            let d = capacity_estimate(e, n).unwrap().value;
            assert!(
                d <= last + 1e-9,
                "{} n = {n}: {d} > {last}",
                e.kind().name()
            );
            last = d;
        }
    }
}
