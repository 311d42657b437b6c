use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{brolin_sample, Bbox, DynGreenEvaluator};
use crate::error::{Error, Result};
use crate::potential::CompactSetModel;

/// Minimum boundary samples per side.
pub const MIN_SIDE_SAMPLES: usize = 256;

/// Backward steps before Julia-side samples are recorded. An atom `k`
/// steps behind the start point has `g_P = g_P(R + 1) / d^k`, so the
/// Brolin default of 20 would leave a floor near `1e-6` in `Γ`.
pub const JULIA_SIDE_BURN_IN: usize = 48;

/// One side of a Klimek distance: a Green function with its boundary
/// samples and capacity.
#[derive(Clone, Debug)]
pub enum GreenSide {
    Set(CompactSetModel),
    /// Filled Julia set; samples are Brolin atoms.
    Julia {
        eval: DynGreenEvaluator,
        samples: Vec<Complex64>,
    },
}

impl GreenSide {
    /// Julia side with `n` backward-iteration samples.
    pub fn julia(eval: DynGreenEvaluator, n: usize, seed: u64) -> Result<Self> {
        let samples = brolin_sample(&eval, n, JULIA_SIDE_BURN_IN, seed)?
            .support()
            .to_vec();
        Ok(GreenSide::Julia { eval, samples })
    }

    pub fn green(&self, z: Complex64) -> f64 {
        match self {
            GreenSide::Set(e) => e.green(z),
            GreenSide::Julia { eval, .. } => eval.green(z),
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        match self {
            GreenSide::Set(e) => e.boundary_samples(),
            GreenSide::Julia { samples, .. } => samples,
        }
    }

    pub fn log_capacity(&self) -> f64 {
        match self {
            GreenSide::Set(e) => e.log_capacity(),
            GreenSide::Julia { eval, .. } => eval.log_capacity(),
        }
    }

    pub fn regularity_verified(&self) -> bool {
        match self {
            GreenSide::Set(e) => e.regularity_verified(),
            GreenSide::Julia { .. } => true,
        }
    }
}

impl From<CompactSetModel> for GreenSide {
    fn from(e: CompactSetModel) -> Self {
        GreenSide::Set(e)
    }
}

#[derive(Clone, Debug)]
pub struct GreenPair {
    pub left: GreenSide,
    pub right: GreenSide,
}

impl GreenPair {
    pub fn new(left: impl Into<GreenSide>, right: impl Into<GreenSide>) -> Self {
        GreenPair {
            left: left.into(),
            right: right.into(),
        }
    }

    /// `|g_left(z) - g_right(z)|`.
    pub fn difference(&self, z: Complex64) -> f64 {
        (self.left.green(z) - self.right.green(z)).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    /// Attained at a left boundary sample (value of `g_right`).
    Left,
    Right,
    /// The log-capacity gap at infinity.
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlimekDistance {
    pub gamma: f64,
    /// `None` when the extremum is at infinity.
    pub argmax_point: Option<[f64; 2]>,
    pub side: Extremum,
    pub cap_gap: f64,
    /// `sup g_right` over left samples.
    pub sup_on_left: f64,
    /// `sup g_left` over right samples.
    pub sup_on_right: f64,
    /// `false` when either side is a point cloud of unverified regularity,
    /// in which case the boundary formula is not justified.
    pub regularity_verified: bool,
}

/// `Γ = max(sup_{∂L} g_R, sup_{∂R} g_L, |log cap L - log cap R|)`.
///
/// `g_L - g_R` is harmonic off `L ∪ R` and tends to the log-capacity gap
/// at infinity, and on `L` it equals `-g_R` (likewise on `R`), so by the
/// maximum principle its sup norm is attained on one of the two
/// boundaries or at infinity.
pub fn klimek_distance(pair: &GreenPair) -> Result<KlimekDistance> {
    for (name, side) in [("left", &pair.left), ("right", &pair.right)] {
        if side.samples().len() < MIN_SIDE_SAMPLES {
            return Err(Error::TooFewSamples {
                requested: MIN_SIDE_SAMPLES,
                available: side.samples().len(),
            });
        }
        if !side.log_capacity().is_finite() {
            return Err(Error::Missing(format!(
                "{name} side has no finite capacity"
            )));
        }
    }
    let (sup_on_left, at_left) = sup_over(pair.left.samples(), |z| pair.right.green(z));
    let (sup_on_right, at_right) = sup_over(pair.right.samples(), |z| pair.left.green(z));
    let cap_gap = (pair.left.log_capacity() - pair.right.log_capacity()).abs();
    let (gamma, side, point) = if cap_gap >= sup_on_left && cap_gap >= sup_on_right {
        (cap_gap, Extremum::Infinity, None)
    } else if sup_on_left >= sup_on_right {
        (sup_on_left, Extremum::Left, Some(at_left))
    } else {
        (sup_on_right, Extremum::Right, Some(at_right))
    };
    Ok(KlimekDistance {
        gamma,
        argmax_point: point.map(|z| [z.re, z.im]),
        side,
        cap_gap,
        sup_on_left,
        sup_on_right,
        regularity_verified: pair.left.regularity_verified() && pair.right.regularity_verified(),
    })
}

fn sup_over(samples: &[Complex64], f: impl Fn(Complex64) -> f64 + Sync) -> (f64, Complex64) {
    let values: Vec<f64> = samples.par_iter().map(|&z| f(z)).collect();
    let mut best = (f64::NEG_INFINITY, samples[0]);
    for (&v, &z) in values.iter().zip(samples) {
        if v > best.0 {
            best = (v, z);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAudit {
    pub grid_max: f64,
    pub gamma: f64,
    /// `grid_max - gamma`; at most the tolerance when the boundary formula
    /// is consistent.
    pub excess: f64,
    pub ok: bool,
}

pub const GRID_AUDIT_TOL: f64 = 1e-3;

/// Checks the boundary formula against `|g_L - g_R|` on a `n × n` grid.
pub fn grid_audit(pair: &GreenPair, gamma: f64, bbox: Bbox, n: usize) -> GridAudit {
    let dx = (bbox.re_max - bbox.re_min) / (n - 1).max(1) as f64;
    let dy = (bbox.im_max - bbox.im_min) / (n - 1).max(1) as f64;
    let grid_max = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::new(
                bbox.re_min + (k % n) as f64 * dx,
                bbox.im_min + (k / n) as f64 * dy,
            );
            pair.difference(z)
        })
        .reduce(|| 0.0, f64::max);
    let excess = grid_max - gamma;
    GridAudit {
        grid_max,
        gamma,
        excess,
        ok: excess <= GRID_AUDIT_TOL,
    }
}
