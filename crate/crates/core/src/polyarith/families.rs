//! Explicit integer polynomial families and exact orbits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::int_poly::IntPolynomial;
use crate::error::{Error, Result};

/// Default cap on numerator+denominator bits in exact orbits.
pub const DEFAULT_DIGIT_CAP_BITS: u64 = 1 << 22;

/// The `n`-th cyclotomic polynomial `Φ_n`.
///
/// Computed by exact division of `z^n - 1` by `Φ_d` for every proper
/// divisor `d` of `n`.
///
/// # Panics
/// If `n == 0`.
pub fn cyclotomic(n: u64) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut memo = BTreeMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u64, memo: &mut BTreeMap<u64, IntPolynomial>) -> IntPolynomial {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = &IntPolynomial::monomial(1, n as usize) - &IntPolynomial::monomial(1, 0);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let phi = cyclotomic_memo(d, memo);
        p = p
            .div_exact(&phi)
            .expect("cyclotomic factors divide z^n - 1");
    }
    memo.insert(n, p.clone());
    p
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The monic integer polynomial `2 T_n(z/2)`.
///
/// Satisfies `p_{n+1} = z p_n - p_{n-1}` with `p_0 = 2`, `p_1 = z`; all
/// roots are `2 cos((2j-1)π/(2n))`.
///
/// # Panics
/// If `n == 0`.
pub fn chebyshev_monic(n: usize) -> IntPolynomial {
    assert!(n >= 1, "Chebyshev index must be positive");
    let z = IntPolynomial::monomial(1, 1);
    let mut prev = IntPolynomial::monomial(2, 0);
    let mut cur = z.clone();
    for _ in 1..n {
        let next = &(&z * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `⌊e^{√d}⌋`.
pub fn runaway_constant(d: u64) -> u64 {
    ((d as f64).sqrt().exp()).floor() as u64
}

/// `x^d - N_d x^{d-1} + 1` with `N_d = ⌊e^{√d}⌋`.
pub fn runaway_family(d: u64) -> Result<IntPolynomial> {
    if d < 3 {
        return Err(Error::InvalidInput(format!(
            "runaway family needs d >= 3, got {d}"
        )));
    }
    let n = runaway_constant(d);
    if n <= 2 {
        return Err(Error::InvalidInput(format!("N_{d} = {n} must exceed 2")));
    }
    let mut coeffs = vec![BigInt::from(0); d as usize + 1];
    coeffs[0] = BigInt::from(1);
    coeffs[d as usize - 1] = -BigInt::from(n);
    coeffs[d as usize] = BigInt::from(1);
    Ok(IntPolynomial::new(coeffs))
}

/// Bits of numerator plus denominator.
pub fn rational_bits(x: &BigRational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// `[x0, P(x0), ..., P^k(x0)]` in exact rational arithmetic.
///
/// Fails once an iterate needs more than `cap_bits` bits.
pub fn iterate_exact(
    p: &IntPolynomial,
    x0: &BigRational,
    k: usize,
    cap_bits: u64,
) -> Result<Vec<BigRational>> {
    let mut orbit = Vec::with_capacity(k + 1);
    orbit.push(x0.clone());
    let mut x = x0.clone();
    for step in 1..=k {
        // bit length of P(x) is at most ~ deg * bits(x) + bits(coeffs)
        let deg = p.degree().unwrap_or(0) as u64;
        let coeff_bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
        let predicted = deg.max(1) * rational_bits(&x) + coeff_bits;
        if predicted > cap_bits.saturating_mul(2) {
            return Err(Error::DigitCap {
                step,
                bits: predicted,
                cap: cap_bits,
            });
        }
        x = p.eval_rational(&x);
        let bits = rational_bits(&x);
        if bits > cap_bits {
            return Err(Error::DigitCap {
                step,
                bits,
                cap: cap_bits,
            });
        }
        orbit.push(x.clone());
    }
    Ok(orbit)
}
