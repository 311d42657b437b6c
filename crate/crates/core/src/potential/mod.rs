//! Discrete logarithmic potential theory on plane compact sets.
//!
//! Equilibrium measures are uniform measures on discrete Fekete points
//! chosen among boundary samples. Intervals, disks and circles use their
//! exact capacities and Green functions; other kinds estimate both from
//! the Fekete atoms.

mod config;
mod diagnostics;
mod fekete;
mod measure;
mod set_model;
mod supnorm;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use config::{parse_point_csv, SetSpec};
pub use diagnostics::{
    minimality_diagnostics, minimality_diagnostics_with_tol, MinimalityRow, MinimalityTable,
    DEFAULT_MINIMALITY_TOL,
};
pub use measure::DiscreteMeasure;
pub use set_model::{CompactSetModel, SetKind, SetOptions};
pub use supnorm::{supnorm, LogModulus, SupNorm};

pub(crate) use set_model::bbox;

use crate::error::{Error, Result};

/// `n` boundary samples of `e` approximately maximizing `Σ log |z_i - z_j|`.
pub fn fekete_points(e: &CompactSetModel, n: usize) -> Result<Vec<Complex64>> {
    let search = fekete::fekete_search(e.boundary_samples(), &e.components, n)?;
    Ok(search
        .indices
        .iter()
        .map(|&i| e.boundary_samples()[i])
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    /// Transfinite diameter `d_n`; zero for degenerate sets.
    pub value: f64,
    pub n: usize,
    pub degenerate: bool,
}

/// `d_n = (∏_{i<j} |z_i - z_j|)^{2/(n(n-1))}` over discrete Fekete points.
pub fn capacity_estimate(e: &CompactSetModel, n: usize) -> Result<CapacityEstimate> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if e.is_degenerate() {
        return Ok(CapacityEstimate {
            value: 0.0,
            n,
            degenerate: true,
        });
    }
    let search = fekete::fekete_search(e.boundary_samples(), &e.components, n)?;
    Ok(CapacityEstimate {
        value: search.log_transfinite_diameter().exp(),
        n,
        degenerate: false,
    })
}

/// Uniform measure on `n` Fekete points of `e`.
pub fn equilibrium_measure(e: &CompactSetModel, n: usize) -> Result<DiscreteMeasure> {
    if e.is_degenerate() {
        return Err(Error::Degenerate(
            "a single point has capacity zero and no equilibrium measure".into(),
        ));
    }
    DiscreteMeasure::uniform(fekete_points(e, n)?)
}

/// Green function of the complement of `Pc(E)` with pole at infinity.
pub fn green_eval(e: &CompactSetModel, z: Complex64) -> f64 {
    e.green(z)
}

/// A sub-union of `e` with capacity one, found by shrinking every interval
/// about its midpoint by a common factor.
///
/// Only intervals and interval unions are supported; other kinds, and
/// sets with capacity below one, are reported as failures.
pub fn unit_capacity_subset(e: &CompactSetModel) -> Result<CompactSetModel> {
    let intervals: Vec<(f64, f64)> = match e.kind() {
        SetKind::Interval { a, b } => vec![(*a, *b)],
        SetKind::IntervalUnion(list) => list.clone(),
        other => {
            return Err(Error::InvalidInput(format!(
                "unit-capacity subset search supports interval unions only, not {}",
                other.name()
            )))
        }
    };
    if e.log_capacity() < 0.0 {
        return Err(Error::CapacityObstruction {
            capacity: e.capacity(),
        });
    }
    if let [(a, b)] = intervals[..] {
        let mid = 0.5 * (a + b);
        return CompactSetModel::build(
            SetKind::Interval {
                a: mid - 2.0,
                b: mid + 2.0,
            },
            *e.options(),
        );
    }
    let shrink = |t: f64| -> Vec<(f64, f64)> {
        intervals
            .iter()
            .map(|&(a, b)| {
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a) * t;
                (mid - half, mid + half)
            })
            .collect()
    };
    let search_opts = SetOptions {
        samples_per_component: 1024,
        equilibrium_atoms: 256,
        ..*e.options()
    };
    let log_cap = |t: f64| -> Result<f64> {
        Ok(CompactSetModel::build(SetKind::IntervalUnion(shrink(t)), search_opts)?.log_capacity())
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if log_cap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-6 {
            break;
        }
    }
    CompactSetModel::build(SetKind::IntervalUnion(shrink(hi)), *e.options())
}
