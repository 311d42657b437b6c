//! Exact and floating polynomial arithmetic, root finding, and the
//! explicit integer polynomial families used throughout the crate.

mod complex_poly;
mod factored;
mod families;
mod int_poly;
pub mod numeric;
mod roots;

pub use complex_poly::ComplexPolynomial;
pub use factored::{FactoredPolynomial, ScaledValue};
pub use families::{
    chebyshev_monic, cyclotomic, divisors, iterate_exact, rational_bits, runaway_constant,
    runaway_family, totient, DEFAULT_DIGIT_CAP_BITS,
};
pub use int_poly::IntPolynomial;
pub use roots::{int_roots, preimages, roots, RootConfig, RootSet};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Parses a rational written as `p`, `p/q`, or a finite decimal.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let err = || crate::Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q == BigInt::from(0) {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let p: BigInt = digits.parse().map_err(|_| err())?;
        let q = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(p, q));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| err())?))
}
