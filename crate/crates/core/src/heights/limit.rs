use num_rational::BigRational;
use serde::Serialize;

use super::canonical_evaluator;
use crate::error::{Error, Result};
use crate::polyarith::numeric::ln_abs_bigint;
use crate::polyarith::{iterate_exact, IntPolynomial, DEFAULT_DIGIT_CAP_BITS};

/// `h(p/q) = log max(|p|, |q|)` in lowest terms.
pub fn rational_height(x: &BigRational) -> f64 {
    ln_abs_bigint(x.numer()).max(ln_abs_bigint(x.denom()))
}

/// The terms `d^{-k} h(P^k(α))`, `k = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightSequence {
    pub terms: Vec<f64>,
    pub degree: usize,
    /// The orbit hit the digit cap before the requested depth.
    pub truncated: bool,
}

impl HeightSequence {
    /// Depth of the last term.
    pub fn depth(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn last(&self) -> f64 {
        *self.terms.last().unwrap()
    }

    /// `2 d^{-k}` at the reached depth `k`: the Weil and canonical heights
    /// differ by a bounded amount, which the scaling divides by `d^k`.
    pub fn tolerance(&self) -> f64 {
        2.0 * (self.degree as f64).powi(-(self.depth() as i32))
    }
}

/// `d^{-k} h(P^k(α))` for `k = 0..=k_max` from the exact orbit.
///
/// Stops early, with `truncated` set, when an iterate exceeds the
/// default digit cap.
pub fn canonical_height_limit(
    p: &IntPolynomial,
    alpha: &BigRational,
    k_max: usize,
) -> Result<HeightSequence> {
    canonical_height_limit_capped(p, alpha, k_max, DEFAULT_DIGIT_CAP_BITS)
}

pub fn canonical_height_limit_capped(
    p: &IntPolynomial,
    alpha: &BigRational,
    k_max: usize,
    cap_bits: u64,
) -> Result<HeightSequence> {
    let d = canonical_evaluator(p)?.degree();
    let mut terms = vec![rational_height(alpha)];
    let mut x = alpha.clone();
    let mut truncated = false;
    for k in 1..=k_max {
        match iterate_exact(p, &x, 1, cap_bits) {
            Ok(mut orbit) => x = orbit.pop().unwrap(),
            Err(Error::DigitCap { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
        terms.push(rational_height(&x) / (d as f64).powi(k as i32));
    }
    Ok(HeightSequence {
        terms,
        degree: d,
        truncated,
    })
}
