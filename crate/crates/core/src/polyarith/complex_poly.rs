use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial with complex double coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Trailing exact zeros are dropped so the last coefficient is nonzero.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs
            .last()
            .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        ComplexPolynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Degree, failing below `min`.
    pub fn require_degree(&self, min: usize) -> Result<usize> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if d < min {
            return Err(Error::DegreeTooSmall { got: d, min });
        }
        Ok(d)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value, derivative and `Σ |c_k| |z|^k` (the rounding-error scale).
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        let r = z.norm();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            abs = abs * r + c.norm();
        }
        (p, dp, abs)
    }

    /// Sum of the moduli of the non-leading coefficients.
    pub fn lower_coeff_norm(&self) -> f64 {
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n].iter().map(|c| c.norm()).sum()
    }

    /// `Σ |c_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `self - c`.
    pub fn shifted(&self, c: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(-c);
        } else {
            coeffs[0] -= c;
        }
        Self::new(coeffs)
    }

    /// Monic-normalized copy.
    pub fn monic(&self) -> Option<Self> {
        let a = self.leading()?;
        Some(Self::new(self.coeffs.iter().map(|c| c / a).collect()))
    }

    /// Builds `a ∏ (z - r)`.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }
}
