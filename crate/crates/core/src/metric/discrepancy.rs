use num_complex::Complex64;

use crate::potential::{bbox, DiscreteMeasure};

/// `max_{1≤k≤K} |∫ w^k dm1 - ∫ w^k dm2|` in a shared frame
/// `w = (z - c) / s`, with `c` the center of the joint bounding box and
/// `s` twice the largest distance from `c`, so both supports fit in a set
/// of unit diameter.
pub fn measure_discrepancy(m1: &DiscreteMeasure, m2: &DiscreteMeasure, k_max: u32) -> f64 {
    let all: Vec<Complex64> = m1.support().iter().chain(m2.support()).copied().collect();
    let (lo, hi) = bbox(&all);
    let c = (lo + hi) * 0.5;
    let s = 2.0 * all.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    let s = if s > 0.0 { s } else { 1.0 };
    let frame = |m: &DiscreteMeasure| m.map(|z| (z - c) / s);
    let (a, b) = (frame(m1), frame(m2));
    (1..=k_max)
        .map(|k| (a.moment(k) - b.moment(k)).norm())
        .fold(0.0, f64::max)
}
