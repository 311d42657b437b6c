//! Weil, Rumely and canonical heights of algebraic numbers over ℚ.
//!
//! Finite places enter through the Gauss lemma: for a number with
//! primitive minimal polynomial `a_d ∏ (z - α_j)` the finite local heights
//! add up to `(1/d) log a_d`. Rationals additionally get a per-prime
//! breakdown of their denominator.

mod algebraic;
mod gap;
mod limit;
mod report;

pub use algebraic::AlgebraicNumber;
pub use gap::{
    height_gap, height_gap_seeded, HeightGapRow, HeightGapTable, GAP_JULIA_SAMPLES, GAP_TOL,
};
pub use limit::{
    canonical_height_limit, canonical_height_limit_capped, rational_height, HeightSequence,
};
pub use report::{factor, HeightMethod, HeightReport, Place, PlaceValue, TRIAL_DIVISION_BOUND};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::DynGreenEvaluator;
use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;
use crate::potential::CompactSetModel;
use report::tree_sum;

/// Relative window around capacity 1 outside which Rumely heights warn.
pub const RUMELY_CAPACITY_WINDOW: f64 = 0.01;

/// `(1/d) Σ f(α_j)`, summed in a fixed tree order.
fn conjugate_mean(alpha: &AlgebraicNumber, f: impl Fn(Complex64) -> f64 + Sync) -> f64 {
    let values: Vec<f64> = alpha.conjugates().roots.par_iter().map(|&z| f(z)).collect();
    tree_sum(&values) / alpha.degree() as f64
}

fn log_plus(z: Complex64) -> f64 {
    z.norm().ln().max(0.0)
}

/// `h(α) = (1/d)(log a_d + Σ log⁺|α_j|)`.
pub fn weil_height(alpha: &AlgebraicNumber) -> HeightReport {
    HeightReport::assemble(
        HeightMethod::Weil,
        conjugate_mean(alpha, log_plus),
        &alpha.leading(),
        alpha.degree(),
        alpha.warnings().to_vec(),
    )
}

/// `h_E(α) = (1/d)(log a_d + Σ g_E(α_j))`.
///
/// Warns when `E` is not conjugation-symmetric or its capacity is not
/// within 1% of 1.
pub fn rumely_height(alpha: &AlgebraicNumber, e: &CompactSetModel) -> Result<HeightReport> {
    e.equilibrium()?;
    let mut warnings = alpha.warnings().to_vec();
    if !e.symmetric() {
        warnings.push("set is not symmetric under complex conjugation".into());
    }
    if (e.capacity() - 1.0).abs() > RUMELY_CAPACITY_WINDOW {
        warnings.push(format!("set has capacity {:.6}, not 1", e.capacity()));
    }
    Ok(HeightReport::assemble(
        HeightMethod::Rumely {
            set: e.kind().name().into(),
        },
        conjugate_mean(alpha, |z| e.green(z)),
        &alpha.leading(),
        alpha.degree(),
        warnings,
    ))
}

/// Evaluator for a canonical height map; refuses non-monic maps.
pub(crate) fn canonical_evaluator(p: &IntPolynomial) -> Result<DynGreenEvaluator> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 2 {
        return Err(Error::DegreeTooSmall { got: d, min: 2 });
    }
    if !p.is_monic() {
        return Err(Error::NonMonic {
            leading: p.coeff(d).to_string(),
        });
    }
    DynGreenEvaluator::from_int(p)
}

/// Canonical height `ĥ_P(α)` of a monic integer map.
///
/// Such a map has good reduction at every prime, so the finite local
/// canonical heights equal the Weil ones and only the archimedean place
/// needs dynamics: `(1/d) Σ g_P(α_j)`.
pub fn canonical_height(p: &IntPolynomial, alpha: &AlgebraicNumber) -> Result<HeightReport> {
    let eval = canonical_evaluator(p)?;
    Ok(canonical_with(&eval, p, alpha))
}

pub(crate) fn canonical_with(
    eval: &DynGreenEvaluator,
    p: &IntPolynomial,
    alpha: &AlgebraicNumber,
) -> HeightReport {
    HeightReport::assemble(
        HeightMethod::Canonical { map: p.to_string() },
        conjugate_mean(alpha, |z| eval.green(z)),
        &alpha.leading(),
        alpha.degree(),
        alpha.warnings().to_vec(),
    )
}
