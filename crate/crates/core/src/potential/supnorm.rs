use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::set_model::CompactSetModel;
use crate::polyarith::{ComplexPolynomial, FactoredPolynomial};

/// Anything with a computable `log |p(z)|`.
pub trait LogModulus {
    fn ln_abs_at(&self, z: Complex64) -> f64;
}

impl LogModulus for ComplexPolynomial {
    fn ln_abs_at(&self, z: Complex64) -> f64 {
        self.eval(z).norm().ln()
    }
}

impl LogModulus for FactoredPolynomial {
    fn ln_abs_at(&self, z: Complex64) -> f64 {
        self.ln_abs(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    /// `‖p‖_E`; may be `inf` when only `log_value` is representable.
    pub value: f64,
    pub log_value: f64,
    pub argmax: Complex64,
    /// Largest gap between neighboring boundary samples.
    pub resolution: f64,
}

const REFINED_PEAKS: usize = 16;
const GOLDEN_STEPS: usize = 80;

/// `max |p|` over the boundary samples, refined by golden-section search
/// along the boundary curve around the largest local maxima.
pub fn supnorm<P: LogModulus + ?Sized>(p: &P, e: &CompactSetModel) -> SupNorm {
    let samples = e.boundary_samples();
    let values: Vec<f64> = samples.iter().map(|&z| p.ln_abs_at(z)).collect();
    let mut best = (
        f64::NEG_INFINITY,
        samples.first().copied().unwrap_or_default(),
    );
    for (&v, &z) in values.iter().zip(samples) {
        if v > best.0 {
            best = (v, z);
        }
    }

    let mut resolution: f64 = 0.0;
    for (ci, comp) in e.components.iter().enumerate() {
        let Some(curve) = &comp.curve else {
            continue;
        };
        let closed = curve.closed();
        let n = comp.len;
        let at = |j: usize| values[comp.start + j];
        let mut peaks = Vec::new();
        for j in 0..n {
            let (prev, next) = if closed {
                ((j + n - 1) % n, (j + 1) % n)
            } else {
                (j.saturating_sub(1), (j + 1).min(n - 1))
            };
            if at(j) >= at(prev) && at(j) >= at(next) {
                peaks.push(j);
            }
            if closed || j + 1 < n {
                let k = (j + 1) % n;
                resolution =
                    resolution.max((samples[comp.start + k] - samples[comp.start + j]).norm());
            }
        }
        peaks.sort_by(|&x, &y| at(y).total_cmp(&at(x)));
        peaks.truncate(REFINED_PEAKS);
        for j in peaks {
            let t = curve.sample_param(j, n);
            let h = if closed {
                1.0 / n as f64
            } else {
                1.0 / (n - 1).max(1) as f64
            };
            let (lo, hi) = if closed {
                (t - h, t + h)
            } else {
                ((t - h).max(0.0), (t + h).min(1.0))
            };
            let f = |s: f64| p.ln_abs_at(e.boundary_point(ci, s).unwrap());
            let (s, v) = golden_max(f, lo, hi);
            if v > best.0 {
                best = (v, e.boundary_point(ci, s).unwrap());
            }
        }
    }
    if e.components.iter().all(|c| c.curve.is_none()) {
        resolution = nearest_neighbor_gap(samples);
    }
    SupNorm {
        value: best.0.exp(),
        log_value: best.0,
        argmax: best.1,
        resolution,
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Largest nearest-neighbor distance, for unordered samples.
fn nearest_neighbor_gap(samples: &[Complex64]) -> f64 {
    if samples.len() < 2 || samples.len() > 20_000 {
        return f64::NAN;
    }
    samples
        .iter()
        .enumerate()
        .map(|(i, z)| {
            samples
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, w)| (z - w).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
