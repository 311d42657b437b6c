use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::complex_poly::ComplexPolynomial;
use super::numeric::{self, ScaledGaussian};
use crate::error::{Error, Result};

/// Integer polynomial with coefficients in ascending degree order.
///
/// The coefficient vector never has a trailing zero, so the zero
/// polynomial is the empty vector and the last entry is the leading
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// `c * z^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|a| a.abs().is_one())
    }

    /// gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact value at a rational point.
    ///
    /// Homogenized Horner on `p/q`, so only one division happens at the
    /// end (the result is reduced by `BigRational::new`).
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        let p = x.numer();
        let q = x.denom();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        // acc = sum c_k p^k q^(d-k); qpow = q^(d+1)
        BigRational::new(acc, q.pow(d as u32))
    }

    /// Quotient by `divisor` when the division is exact over ℤ.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput(format!(
                "{divisor} does not divide {self} exactly"
            )));
        }
        Ok(q)
    }

    /// Long division; fails if a quotient coefficient is not integral.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.leading().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "division by {divisor} leaves a non-integral quotient"
                )));
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &qc * dc;
            }
            quot[k] = qc;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Floating image, coefficients rounded to `f64`.
    pub fn to_complex(&self) -> ComplexPolynomial {
        ComplexPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
                .collect(),
        )
    }

    /// Coefficients scaled by a common power of two so they fit in `f64`.
    pub(crate) fn to_f64_scaled(&self) -> Vec<f64> {
        let max_bits = self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
        let shift = (max_bits - 900).max(0);
        self.coeffs
            .iter()
            .map(|c| numeric::bigint_to_f64_shifted(c, shift))
            .collect()
    }

    /// `ln |c_k|` for every coefficient (`-inf` for zeros).
    pub(crate) fn ln_abs_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(numeric::ln_abs_bigint).collect()
    }

    /// Exact value `P(z)` at the dyadic point `z`, as a scaled Gaussian integer.
    pub fn eval_exact(&self, z: Complex64) -> ScaledGaussian {
        horner_exact(&self.coeffs, z)
    }

    /// Number of factors `z` dividing the polynomial.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Drops the factor `z^m` where `m` is [`Self::zero_root_multiplicity`].
    pub fn strip_zero_roots(&self) -> Self {
        Self::new(self.coeffs[self.zero_root_multiplicity()..].to_vec())
    }

    /// Composition `self(other(z))`.
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * other) + &Self::monomial(c.clone(), 0)
        })
    }
}

/// Horner's rule on `(X + iY) 2^e` carried out in Gaussian integers.
pub(crate) fn horner_exact(coeffs: &[BigInt], z: Complex64) -> ScaledGaussian {
    let Some(d) = coeffs.len().checked_sub(1) else {
        return ScaledGaussian {
            re: BigInt::zero(),
            im: BigInt::zero(),
            exp: 0,
        };
    };
    let g = ScaledGaussian::from_complex(z);
    let (x, y, s) = if g.exp >= 0 {
        let sh = g.exp as usize;
        (&g.re << sh, &g.im << sh, 0usize)
    } else {
        (g.re.clone(), g.im.clone(), (-g.exp) as usize)
    };
    let mut re = coeffs[d].clone();
    let mut im = BigInt::zero();
    for (k, c) in coeffs.iter().enumerate().take(d).rev() {
        let nre = &re * &x - &im * &y;
        let nim = &re * &y + &im * &x;
        re = nre + (c << (s * (d - k)));
        im = nim;
    }
    ScaledGaussian {
        re,
        im,
        exp: -((s * d) as i64),
    }
}

impl fmt::Display for IntPolynomial {
    /// Ascending whitespace-separated coefficients, the polynomial text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses `c0 c1 ... cd`, whitespace-separated decimal integers.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("not an integer coefficient: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Ok(Self::new(coeffs))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_reports_degree() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPolynomial::from_i64(&[0, 0]).degree(), None);
    }

    #[test]
    fn parse_and_display() {
        let p: IntPolynomial = " -2 0  1 ".parse().unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[-2, 0, 1]));
        assert_eq!(p.to_string(), "-2 0 1");
        assert!("1 x".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn exact_division() {
        let a = IntPolynomial::from_i64(&[-1, 0, 0, 0, 0, 0, 1]);
        let b = IntPolynomial::from_i64(&[-1, 1]);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, IntPolynomial::from_i64(&[1, 1, 1, 1, 1, 1]));
        assert!(a.div_exact(&IntPolynomial::from_i64(&[2, 1])).is_err());
    }

    #[test]
    fn rational_evaluation() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let x = BigRational::new(3.into(), 2.into());
        assert_eq!(p.eval_rational(&x), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn exact_eval_matches_cancellation_free_value() {
        // 2 T_20(z/2) has coefficients near 1e5 but is bounded by 2 on [-2, 2].
        let p = crate::polyarith::chebyshev_monic(20);
        let theta = 0.3f64;
        let x = 2.0 * theta.cos();
        let v = p.eval_exact(Complex64::new(x, 0.0)).to_complex();
        // x is a rounded value; compare against the closed form at the rounded x.
        let t = (x / 2.0).acos();
        assert!((v.re - 2.0 * (20.0 * t).cos()).abs() < 1e-10);
    }

    #[test]
    fn content_and_primitive_part() {
        let p = IntPolynomial::from_i64(&[4, -6, -2]);
        assert_eq!(p.content(), BigInt::from(2));
        assert_eq!(p.primitive_part(), IntPolynomial::from_i64(&[-2, 3, 1]));
    }
}
