//! Conversions between big integers and scaled floating point.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{float::FloatCore, ToPrimitive, Zero};

/// `x * 2^exp` without intermediate overflow or underflow.
pub fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(exp as i32)
}

/// Splits `x` into `(m, e)` with `x ≈ m * 2^e` and `|m| < 2^62`.
pub fn bigint_scaled(x: &BigInt) -> (f64, i64) {
    let bits = x.bits() as i64;
    if bits <= 62 {
        return (x.to_f64().unwrap_or(0.0), 0);
    }
    let shift = bits - 62;
    let top: BigInt = x >> (shift as usize);
    (top.to_f64().unwrap_or(0.0), shift)
}

/// Nearest `f64` to `x / 2^shift`, saturating to ±inf.
pub fn bigint_to_f64_shifted(x: &BigInt, shift: i64) -> f64 {
    let (m, e) = bigint_scaled(x);
    ldexp(m, e - shift)
}

/// Natural log of `|x|`; `-inf` for zero.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = bigint_scaled(x);
    m.abs().ln() + e as f64 * std::f64::consts::LN_2
}

/// A Gaussian integer times a power of two, `(re + i im) * 2^exp`.
#[derive(Clone, Debug)]
pub struct ScaledGaussian {
    pub re: BigInt,
    pub im: BigInt,
    pub exp: i64,
}

impl ScaledGaussian {
    /// Exact representation of a floating complex number.
    pub fn from_complex(z: Complex64) -> Self {
        let (mr, er) = decompose(z.re);
        let (mi, ei) = decompose(z.im);
        let exp = match (mr.is_zero(), mi.is_zero()) {
            (true, true) => 0,
            (false, true) => er,
            (true, false) => ei,
            (false, false) => er.min(ei),
        };
        let re = if mr.is_zero() {
            mr
        } else {
            mr << ((er - exp) as usize)
        };
        let im = if mi.is_zero() {
            mi
        } else {
            mi << ((ei - exp) as usize)
        };
        ScaledGaussian { re, im, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Mantissa/exponent split: value ≈ `m * 2^e` with `|m| < 2^62`.
    pub fn scaled(&self) -> (Complex64, i64) {
        let bits = self.re.bits().max(self.im.bits()) as i64;
        let shift = (bits - 62).max(0);
        let re: BigInt = &self.re >> (shift as usize);
        let im: BigInt = &self.im >> (shift as usize);
        (
            Complex64::new(re.to_f64().unwrap_or(0.0), im.to_f64().unwrap_or(0.0)),
            shift + self.exp,
        )
    }

    pub fn to_complex(&self) -> Complex64 {
        let (m, e) = self.scaled();
        Complex64::new(ldexp(m.re, e), ldexp(m.im, e))
    }

    /// `log2 |value|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.scaled();
        m.norm().log2() + e as f64
    }
}

/// `x = m * 2^e` exactly.
fn decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (mantissa, exp, sign) = FloatCore::integer_decode(x);
    let m = BigInt::from(mantissa);
    let m = if sign < 0 { -m } else { m };
    (m, exp as i64)
}

/// Ratio `a / b` of two scaled Gaussians as a float.
pub fn ratio(a: &ScaledGaussian, b: &ScaledGaussian) -> Option<Complex64> {
    if b.is_zero() {
        return None;
    }
    let (ma, ea) = a.scaled();
    let (mb, eb) = b.scaled();
    let q = ma / mb;
    Some(Complex64::new(ldexp(q.re, ea - eb), ldexp(q.im, ea - eb)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decomposition_round_trips() {
        for &(re, im) in &[
            (1.5, -0.25),
            (0.0, 3.0),
            (1e-300, 7.0),
            (-2.0, 0.0),
            (1e200, -3e198),
        ] {
            let z = Complex64::new(re, im);
            let g = ScaledGaussian::from_complex(z);
            assert!((g.to_complex() - z).norm() <= 1e-15 * z.norm(), "{z}");
        }
    }

    #[test]
    fn ln_of_huge_integers() {
        let x = BigInt::from(10).pow(400);
        assert!((ln_abs_bigint(&x) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert_eq!(ln_abs_bigint(&BigInt::from(1)), 0.0);
    }

    #[test]
    fn ldexp_spans_extremes() {
        assert_eq!(ldexp(1.0, 1023), 2f64.powi(1023));
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
        assert!(ldexp(1.0, 5000).is_infinite());
    }
}
