use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::green::DynGreenEvaluator;
use crate::error::{Error, Result};
use crate::polyarith::{preimages, RootConfig};
use crate::potential::DiscreteMeasure;

pub const DEFAULT_BURN_IN: usize = 20;
/// Independent backward orbits per sample; fixed so results do not depend
/// on the thread count.
pub const ORBITS: usize = 16;

/// Samples the Brolin measure by backward random iteration.
///
/// Each orbit starts at `R + 1`, takes `burn_in` backward steps, then at
/// every step records all `d` preimages of the current point and moves to
/// one chosen uniformly. Recording the whole fiber makes the moments of
/// order below `d` exact. Orbit `k` draws from a ChaCha stream seeded with
/// `seed ^ k`.
pub fn brolin_sample(
    eval: &DynGreenEvaluator,
    n_points: usize,
    burn_in: usize,
    seed: u64,
) -> Result<DiscreteMeasure> {
    if n_points == 0 {
        return Err(Error::InvalidInput(
            "need at least one Brolin sample".into(),
        ));
    }
    let d = eval.degree();
    let steps = n_points.div_ceil(d);
    let orbits = ORBITS.min(steps);
    let start = Complex64::new(eval.escape_radius() + 1.0, 0.0);
    let config = RootConfig::default();
    let chunks: Vec<Vec<Complex64>> = (0..orbits)
        .into_par_iter()
        .map(|k| {
            let my_steps = steps / orbits + usize::from(k < steps % orbits);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
            let mut z = start;
            let mut out = Vec::with_capacity(my_steps * d);
            for step in 0..burn_in + my_steps {
                let fiber =
                    preimages(eval.factored(), z, &config).map_err(|e| Error::Preimage {
                        step,
                        source: Box::new(e),
                    })?;
                if step >= burn_in {
                    out.extend_from_slice(&fiber);
                }
                z = fiber[rng.random_range(0..fiber.len())];
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut atoms: Vec<Complex64> = chunks.into_iter().flatten().collect();
    atoms.truncate(n_points);
    DiscreteMeasure::uniform(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::ComplexPolynomial;
    use std::f64::consts::PI;

    fn evaluator(c: &[f64]) -> DynGreenEvaluator {
        DynGreenEvaluator::new(&ComplexPolynomial::from_real(c)).unwrap()
    }

    #[test]
    fn squaring_map_gives_haar_measure() {
        let m = brolin_sample(&evaluator(&[0.0, 0.0, 1.0]), 4096, DEFAULT_BURN_IN, 7).unwrap();
        assert_eq!(m.len(), 4096);
        let mut bins = [0usize; 16];
        let mut on_circle = 0;
        for &z in m.support() {
            let t = (z.arg() + PI) / (2.0 * PI);
            bins[((t * 16.0) as usize).min(15)] += 1;
            if (0.99..=1.01).contains(&z.norm()) {
                on_circle += 1;
            }
        }
        for b in bins {
            assert!((b as f64 / 4096.0 - 1.0 / 16.0).abs() <= 0.02, "{bins:?}");
        }
        assert!(on_circle as f64 >= 0.99 * 4096.0);
        // ∫ log|z - ζ| dω = g(z) + log cap = log 2.5
        let pot = m.log_potential(Complex64::new(2.5, 0.0));
        assert!((pot - 2.5f64.ln()).abs() < 0.01);
    }

    #[test]
    fn chebyshev_map_gives_arcsine_law() {
        let m = brolin_sample(&evaluator(&[-2.0, 0.0, 1.0]), 4096, DEFAULT_BURN_IN, 1).unwrap();
        assert!(m
            .support()
            .iter()
            .all(|z| z.im.abs() < 1e-3 && z.re.abs() <= 2.0 + 1e-9));
        let edge = m.mass_where(|z| z.re <= -1.8);
        let middle = m.mass_where(|z| z.re.abs() <= 0.1);
        assert!(edge > 2.0 * middle, "{edge} vs {middle}");
    }

    #[test]
    fn deterministic_for_a_seed() {
        let e = evaluator(&[-1.0, 0.0, 1.0]);
        let a = brolin_sample(&e, 500, 5, 42).unwrap();
        let b = brolin_sample(&e, 500, 5, 42).unwrap();
        assert_eq!(a, b);
        let c = brolin_sample(&e, 500, 5, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let e = evaluator(&[0.0, -1.0, 0.0, 1.0]);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let single = pool.install(|| brolin_sample(&e, 300, 10, 9).unwrap());
        let many = brolin_sample(&e, 300, 10, 9).unwrap();
        assert_eq!(single, many);
    }

    #[test]
    fn low_moments_are_exact() {
        // fibers of z^3 - z have power sums p1 = 0, p2 = 2
        let e = evaluator(&[0.0, -1.0, 0.0, 1.0]);
        let m = brolin_sample(&e, 3 * 400, 10, 3).unwrap();
        assert!(m.moment(1).norm() < 1e-12);
        assert!((m.moment(2) - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-12);
    }
}
