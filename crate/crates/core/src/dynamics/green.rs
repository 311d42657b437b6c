use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyarith::numeric::ln_abs_bigint;
use crate::polyarith::{ComplexPolynomial, FactoredPolynomial, IntPolynomial, RootConfig};

pub const DEFAULT_MAX_ITER: usize = 256;

/// Evaluates `g_P(z) = lim d^{-n} log⁺ |P^n(z)|`.
///
/// Iteration runs on the factored form, which stays accurate for integer
/// families whose expanded coefficients cancel badly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DynGreenEvaluator {
    poly: ComplexPolynomial,
    factored: FactoredPolynomial,
    degree: usize,
    leading_abs: f64,
    escape_radius: f64,
    max_iter: usize,
    tail_constant: f64,
}

/// Result of one Green evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: f64,
    /// `false` when the orbit stayed within the escape radius for
    /// `max_iter` steps; `value` is then 0.
    pub escaped: bool,
    pub iterations: usize,
}

impl DynGreenEvaluator {
    pub fn new(p: &ComplexPolynomial) -> Result<Self> {
        p.require_degree(2)?;
        let factored = p.factored(&RootConfig::default())?;
        Self::assemble(p.clone(), factored)
    }

    /// Uses exact root polishing, needed for high-degree integer families.
    pub fn from_int(p: &IntPolynomial) -> Result<Self> {
        let d = p.degree().ok_or(Error::ZeroPolynomial)?;
        if d < 2 {
            return Err(Error::DegreeTooSmall { got: d, min: 2 });
        }
        let factored = p.factored(&RootConfig::default())?;
        Self::assemble(p.to_complex(), factored)
    }

    fn assemble(poly: ComplexPolynomial, factored: FactoredPolynomial) -> Result<Self> {
        let degree = poly.require_degree(2)?;
        let leading_abs = poly.leading().unwrap().norm();
        // Beyond R: |P(z)| >= |z|^{d-1} (|a||z| - Σ|c_k|) >= 2|z|.
        let escape_radius = ((poly.lower_coeff_norm() + 2.0) / leading_abs).max(2.0);
        Ok(DynGreenEvaluator {
            tail_constant: leading_abs.ln() / (degree - 1) as f64,
            poly,
            factored,
            degree,
            leading_abs,
            escape_radius,
            max_iter: DEFAULT_MAX_ITER,
        })
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn poly(&self) -> &ComplexPolynomial {
        &self.poly
    }

    pub fn factored(&self) -> &FactoredPolynomial {
        &self.factored
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn leading_abs(&self) -> f64 {
        self.leading_abs
    }

    pub fn escape_radius(&self) -> f64 {
        self.escape_radius
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    /// `(1/(d-1)) log |a_d|`; `g_P(z) = log|z| + tail_constant + o(1)`.
    pub fn tail_constant(&self) -> f64 {
        self.tail_constant
    }

    /// `log cap K_P = -tail_constant`.
    pub fn log_capacity(&self) -> f64 {
        -self.tail_constant
    }

    /// `P(z)` through the factored form.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.factored.eval(z)
    }

    pub fn green(&self, z: Complex64) -> f64 {
        self.eval(z).value
    }

    pub fn eval(&self, z: Complex64) -> GreenValue {
        let d = self.degree as f64;
        let mut w = z;
        let mut k = 0;
        loop {
            if w.norm() > self.escape_radius {
                let value = self.escaped_green(w) / d.powi(k as i32);
                return GreenValue {
                    value: value.max(0.0),
                    escaped: true,
                    iterations: k,
                };
            }
            if k == self.max_iter {
                return GreenValue {
                    value: 0.0,
                    escaped: false,
                    iterations: k,
                };
            }
            let next = self.factored.eval_scaled(w);
            k += 1;
            match next.to_finite().filter(|v| v.is_finite()) {
                Some(v) => w = v,
                None => {
                    // |P^k(z)| beyond e^{600}: the tail is below 1e-250
                    let value = (next.ln_abs() + self.tail_constant) / d.powi(k as i32);
                    return GreenValue {
                        value: value.max(0.0),
                        escaped: true,
                        iterations: k,
                    };
                }
            }
        }
    }

    /// `g_P(w)` for `|w| > R`: `log|w| + Σ_j d^{-(j+1)} (log|a| + log|P(w_j)/(a w_j^d)|)`.
    fn escaped_green(&self, w: Complex64) -> f64 {
        let d = self.degree as f64;
        let mut acc = w.norm().ln() + self.tail_constant;
        let mut scale = 1.0 / d;
        let mut w = w;
        for _ in 0..64 {
            let eps = self.factored.ln_tail(w);
            let term = scale * eps;
            acc += term;
            if term.abs() <= 1e-17 * acc.abs().max(1.0) {
                break;
            }
            match self
                .factored
                .eval_scaled(w)
                .to_finite()
                .filter(|v| v.is_finite())
            {
                Some(v) => w = v,
                None => break,
            }
            scale /= d;
        }
        acc
    }
}

/// `g_P(z)`; builds an evaluator per call.
pub fn dyn_green(p: &ComplexPolynomial, z: Complex64) -> Result<f64> {
    Ok(DynGreenEvaluator::new(p)?.green(z))
}

/// Polynomials whose degree and leading coefficient are known.
pub trait LeadingTerm {
    /// `(degree, log |leading coefficient|)`.
    fn degree_and_ln_leading(&self) -> Result<(usize, f64)>;
}

impl LeadingTerm for ComplexPolynomial {
    fn degree_and_ln_leading(&self) -> Result<(usize, f64)> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok((d, self.leading().unwrap().norm().ln()))
    }
}

impl LeadingTerm for IntPolynomial {
    fn degree_and_ln_leading(&self) -> Result<(usize, f64)> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok((d, ln_abs_bigint(self.leading().unwrap())))
    }
}

/// `cap K_P = |a_d|^{-1/(d-1)}`.
pub fn julia_capacity<P: LeadingTerm + ?Sized>(p: &P) -> Result<f64> {
    Ok(julia_log_capacity(p)?.exp())
}

pub fn julia_log_capacity<P: LeadingTerm + ?Sized>(p: &P) -> Result<f64> {
    let (d, ln_a) = p.degree_and_ln_leading()?;
    if d < 2 {
        return Err(Error::DegreeTooSmall { got: d, min: 2 });
    }
    Ok(-ln_a / (d - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::chebyshev_monic;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn joukowski_green(z: Complex64) -> f64 {
        // z = w + 1/w, |w| >= 1
        let s = (z - 2.0).sqrt() * (z + 2.0).sqrt();
        ((z + s) / 2.0).norm().max(((z - s) / 2.0).norm()).ln()
    }

    #[test]
    fn green_examples() {
        let sq = ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]);
        assert!((dyn_green(&sq, c(3.0, 0.0)).unwrap() - 3f64.ln()).abs() < 1e-12);
        let cheb = ComplexPolynomial::from_real(&[-2.0, 0.0, 1.0]);
        let g = dyn_green(&cheb, c(3.0, 0.0)).unwrap();
        assert!((g - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        assert_eq!(dyn_green(&cheb, c(1.5, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn non_escape_is_flagged() {
        let e = DynGreenEvaluator::new(&ComplexPolynomial::from_real(&[-1.0, 0.0, 1.0])).unwrap();
        let v = e.eval(c(0.0, 0.0));
        assert!(!v.escaped);
        assert_eq!(v.value, 0.0);
        assert_eq!(v.iterations, DEFAULT_MAX_ITER);
    }

    #[test]
    fn asymptotics_with_nonmonic_leading() {
        let p = ComplexPolynomial::from_real(&[1.0, 0.0, 0.0, 2.0]);
        let e = DynGreenEvaluator::new(&p).unwrap();
        let z = Complex64::from_polar(1e6, 0.3);
        let g = e.green(z);
        assert!((g - (z.norm().ln() + 2f64.ln() / 2.0)).abs() < 1e-5);
        assert!((e.log_capacity() + 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn high_degree_chebyshev_is_the_interval_green_function() {
        let p = chebyshev_monic(128);
        let e = DynGreenEvaluator::from_int(&p).unwrap();
        for z in [c(3.0, 0.0), c(2.5, 0.0), c(0.3, 0.2), c(-2.1, 0.0)] {
            let err = (e.green(z) - joukowski_green(z)).abs();
            assert!(err < 1e-9, "z = {z}: {err}");
        }
        assert_eq!(e.green(c(1.99, 0.0)), 0.0);
    }

    #[test]
    fn capacity_formula() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(julia_capacity(&p).unwrap(), 1.0);
        let p = IntPolynomial::from_i64(&[0, 1, 0, 2]);
        assert!((julia_capacity(&p).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let p = IntPolynomial::from_i64(&[0, 0, 3]);
        assert!((julia_capacity(&p).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(julia_capacity(&IntPolynomial::from_i64(&[1, 5])).is_err());
    }
}
