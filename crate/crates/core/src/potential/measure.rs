use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finitely supported probability measure on ℂ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    support: Vec<Complex64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Weights must be nonnegative and are renormalized to sum to one.
    pub fn new(support: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidInput("measure with empty support".into()));
        }
        if support.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} atoms but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput("negative or non-finite weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("measure has zero total mass".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(DiscreteMeasure { support, weights })
    }

    /// Equal weights on `points` (the normalized counting measure).
    pub fn uniform(points: Vec<Complex64>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    pub fn support(&self) -> &[Complex64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.support
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫ z^k dμ`.
    pub fn moment(&self, k: u32) -> Complex64 {
        self.atoms().map(|(z, w)| z.powu(k) * w).sum()
    }

    /// `∫ f(z) dμ` over atoms where the predicate holds.
    pub fn mass_where(&self, pred: impl Fn(Complex64) -> bool) -> f64 {
        self.atoms().filter(|(z, _)| pred(*z)).map(|(_, w)| w).sum()
    }

    /// Logarithmic potential `∫ ln|z - ζ| dμ(ζ)`.
    pub fn log_potential(&self, z: Complex64) -> f64 {
        self.atoms().map(|(s, w)| w * (z - s).norm().ln()).sum()
    }

    /// Image under `z ↦ f(z)`.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        DiscreteMeasure {
            support: self.support.iter().map(|&z| f(z)).collect(),
            weights: self.weights.clone(),
        }
    }

    /// CSV rows `re,im,weight` with a header.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "re,im,weight")?;
        for (z, w) in self.atoms() {
            writeln!(
                out,
                "{},{},{}",
                crate::harness::format_sig(z.re),
                crate::harness::format_sig(z.im),
                crate::harness::format_sig(w)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_weights() {
        let m = DiscreteMeasure::new(
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            vec![2.0, 6.0],
        )
        .unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
        assert_eq!(m.weights(), &[0.25, 0.75]);
        assert!((m.moment(1).re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DiscreteMeasure::uniform(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![Complex64::new(0.0, 0.0)], vec![-1.0]).is_err());
    }

    #[test]
    fn roots_of_unity_potential() {
        // (1/n) ln|z^n - 1|
        let n = 8;
        let pts = (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        let m = DiscreteMeasure::uniform(pts).unwrap();
        let z = Complex64::new(1.5, 0.2);
        let expected = (z.powu(n) - 1.0).norm().ln() / n as f64;
        assert!((m.log_potential(z) - expected).abs() < 1e-14);
    }
}
