use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::complex_poly::ComplexPolynomial;
use super::numeric::ldexp;

/// Polynomial stored as `leading * ∏ (z - root)`.
///
/// Evaluation through the factored form has small relative error
/// everywhere, while Horner on the expanded coefficients loses all
/// accuracy when the coefficients are large and cancel (Chebyshev-type
/// families of high degree). Values are carried with a separate binary
/// exponent so iterating never overflows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoredPolynomial {
    pub leading: Complex64,
    pub roots: Vec<Complex64>,
}

/// `mantissa * 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    pub mantissa: Complex64,
    pub exp: i64,
}

impl ScaledValue {
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    /// The value as a plain float when it is representable without overflow.
    pub fn to_finite(&self) -> Option<Complex64> {
        if self.exp > 900 {
            return None;
        }
        Some(Complex64::new(
            ldexp(self.mantissa.re, self.exp),
            ldexp(self.mantissa.im, self.exp),
        ))
    }
}

impl FactoredPolynomial {
    pub fn new(leading: Complex64, roots: Vec<Complex64>) -> Self {
        FactoredPolynomial { leading, roots }
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn eval_scaled(&self, z: Complex64) -> ScaledValue {
        let mut acc = self.leading;
        let mut exp = 0i64;
        for &r in &self.roots {
            acc *= z - r;
            let m = acc.re.abs().max(acc.im.abs());
            if m > 1e150 || (m < 1e-150 && m > 0.0) {
                let e = m.log2().floor() as i64;
                acc = Complex64::new(ldexp(acc.re, -e), ldexp(acc.im, -e));
                exp += e;
            }
        }
        ScaledValue { mantissa: acc, exp }
    }

    /// Plain evaluation; saturates to infinity on overflow.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let v = self.eval_scaled(z);
        Complex64::new(ldexp(v.mantissa.re, v.exp), ldexp(v.mantissa.im, v.exp))
    }

    pub fn ln_abs(&self, z: Complex64) -> f64 {
        self.eval_scaled(z).ln_abs()
    }

    /// `Σ 1 / (z - r)`, i.e. `P'(z) / P(z)`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.roots.iter().map(|&r| (z - r).inv()).sum()
    }

    /// `ln |P(w) / (a w^d)| = Σ ln |1 - r/w|`, accurate for large `|w|`.
    pub fn ln_tail(&self, w: Complex64) -> f64 {
        let inv = w.inv();
        self.roots
            .iter()
            .map(|&r| {
                let t = -r * inv;
                // ln|1 + t| = ½ ln(1 + 2 Re t + |t|²)
                0.5 * (2.0 * t.re + t.norm_sqr()).ln_1p()
            })
            .sum()
    }

    /// Largest root modulus.
    pub fn root_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Complex64 {
        if self.roots.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        self.roots.iter().sum::<Complex64>() / self.roots.len() as f64
    }

    /// Expanded coefficients (rounded).
    pub fn expand(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_roots(self.leading, &self.roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_evaluation_survives_overflow() {
        let p = FactoredPolynomial::new(
            Complex64::new(1.0, 0.0),
            vec![Complex64::new(0.0, 0.0); 400],
        );
        let v = p.eval_scaled(Complex64::new(10.0, 0.0));
        assert!((v.ln_abs() - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!(p.eval(Complex64::new(10.0, 0.0)).re.is_infinite());
    }

    #[test]
    fn tail_is_zero_for_power_maps() {
        let p =
            FactoredPolynomial::new(Complex64::new(3.0, 0.0), vec![Complex64::new(0.0, 0.0); 2]);
        assert_eq!(p.ln_tail(Complex64::new(5.0, 1.0)), 0.0);
    }

    #[test]
    fn matches_horner_on_small_polynomial() {
        let roots = vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.0),
            Complex64::new(0.0, -2.0),
        ];
        let f = FactoredPolynomial::new(Complex64::new(2.0, -1.0), roots);
        let p = f.expand();
        let z = Complex64::new(0.7, 0.4);
        assert!((f.eval(z) - p.eval(z)).norm() < 1e-13);
    }
}
