use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::polyarith::numeric::ln_abs_bigint;

/// Which height a report carries.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HeightMethod {
    Weil,
    /// Green function of the named set at the archimedean place.
    Rumely {
        set: String,
    },
    /// Canonical height of the map with the given ascending coefficients.
    Canonical {
        map: String,
    },
}

/// A place of ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Infinite,
    Prime(BigInt),
    /// Unfactored cofactor above the trial-division bound.
    Residual(BigInt),
    /// Sum over all finite places, `(1/d) log a_d`.
    Finite,
}

impl Place {
    pub fn tag(&self) -> String {
        match self {
            Place::Infinite => "inf".into(),
            Place::Prime(p) => format!("p={p}"),
            Place::Residual(n) => format!("residual={n}"),
            Place::Finite => "finite".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaceValue {
    pub place: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightReport {
    pub total: f64,
    pub archimedean: f64,
    pub nonarchimedean: f64,
    pub per_place: Vec<PlaceValue>,
    pub method: HeightMethod,
    pub warnings: Vec<String>,
}

impl HeightReport {
    /// Assembles a report from the archimedean value and the leading
    /// coefficient `a` of the minimal polynomial of a degree `d` number.
    ///
    /// For rationals (`d = 1`) the finite part `log a` is split over the
    /// primes dividing the denominator.
    pub(crate) fn assemble(
        method: HeightMethod,
        archimedean: f64,
        leading: &BigInt,
        d: usize,
        warnings: Vec<String>,
    ) -> Self {
        let mut per_place = vec![PlaceValue {
            place: Place::Infinite.tag(),
            value: archimedean,
        }];
        let nonarchimedean = if d == 1 {
            for (p, k) in factor(leading) {
                let value = match &p {
                    Place::Prime(p) => k as f64 * ln_abs_bigint(p),
                    Place::Residual(n) => ln_abs_bigint(n),
                    _ => unreachable!(),
                };
                per_place.push(PlaceValue {
                    place: p.tag(),
                    value,
                });
            }
            ln_abs_bigint(leading)
        } else {
            let value = ln_abs_bigint(leading) / d as f64;
            per_place.push(PlaceValue {
                place: Place::Finite.tag(),
                value,
            });
            value
        };
        HeightReport {
            total: archimedean + nonarchimedean,
            archimedean,
            nonarchimedean,
            per_place,
            method,
            warnings,
        }
    }
}

/// Trial-division bound for the per-prime breakdown.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Prime factorization of `|n|` by trial division up to
/// [`TRIAL_DIVISION_BOUND`]; a cofactor left over is reported as a prime
/// when it is provably one (below the bound squared), as a residual
/// otherwise.
pub fn factor(n: &BigInt) -> Vec<(Place, u32)> {
    let mut n = n.magnitude().clone();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND {
        if let Some(small) = n.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
        }
        let (q, r) = n.div_rem(&p.into());
        if r.is_zero() {
            n = q;
            let mut k = 1;
            loop {
                let (q, r) = n.div_rem(&p.into());
                if !r.is_zero() {
                    break;
                }
                n = q;
                k += 1;
            }
            out.push((Place::Prime(p.into()), k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let bound = num_bigint::BigUint::from(TRIAL_DIVISION_BOUND);
        if n <= &bound * &bound {
            out.push((Place::Prime(n.into()), 1));
        } else {
            out.push((Place::Residual(n.into()), 1));
        }
    }
    out
}

/// Pairwise (tree) sum, independent of how the terms were computed.
pub(crate) fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => tree_sum(&xs[..n / 2]) + tree_sum(&xs[n / 2..]),
    }
}
