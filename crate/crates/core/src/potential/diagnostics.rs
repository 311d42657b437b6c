use serde::{Deserialize, Serialize};

use super::set_model::CompactSetModel;
use super::supnorm::supnorm;
use crate::error::{Error, Result};
use crate::polyarith::{numeric::ln_abs_bigint, IntPolynomial, RootConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalityRow {
    pub degree: usize,
    /// `(1/d) log |a_d|`.
    pub leading_term: f64,
    /// `(1/d) log ‖P‖_E`.
    pub supnorm_term: f64,
}

/// Asymptotic-minimality table: `(1/d) log |a_d| → -log cap E` and
/// `(1/d) log ‖P‖_E → 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalityTable {
    pub rows: Vec<MinimalityRow>,
    pub leading_target: f64,
    /// Deviations from the targets at the largest degree.
    pub leading_deviation: f64,
    pub supnorm_deviation: f64,
    pub tolerance: f64,
    pub leading_ok: bool,
    pub supnorm_ok: bool,
}

impl MinimalityTable {
    pub fn minimal(&self) -> bool {
        self.leading_ok && self.supnorm_ok
    }
}

pub const DEFAULT_MINIMALITY_TOL: f64 = 0.05;

pub fn minimality_diagnostics(
    seq: &[IntPolynomial],
    e: &CompactSetModel,
) -> Result<MinimalityTable> {
    minimality_diagnostics_with_tol(seq, e, DEFAULT_MINIMALITY_TOL)
}

pub fn minimality_diagnostics_with_tol(
    seq: &[IntPolynomial],
    e: &CompactSetModel,
    tolerance: f64,
) -> Result<MinimalityTable> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("empty polynomial sequence".into()));
    }
    let config = RootConfig::default();
    let mut rows = Vec::with_capacity(seq.len());
    for p in seq {
        let d = p.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::DegreeTooSmall { got: 0, min: 1 });
        }
        let f = p.factored(&config)?;
        let sup = supnorm(&f, e);
        rows.push(MinimalityRow {
            degree: d,
            leading_term: ln_abs_bigint(p.leading().unwrap()) / d as f64,
            supnorm_term: sup.log_value / d as f64,
        });
    }
    let leading_target = -e.log_capacity();
    let last = rows.iter().max_by_key(|r| r.degree).unwrap();
    let leading_deviation = (last.leading_term - leading_target).abs();
    let supnorm_deviation = last.supnorm_term.abs();
    Ok(MinimalityTable {
        leading_target,
        leading_deviation,
        supnorm_deviation,
        tolerance,
        leading_ok: leading_deviation <= tolerance,
        supnorm_ok: supnorm_deviation <= tolerance,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::{chebyshev_monic, cyclotomic};
    use num_complex::Complex64;

    #[test]
    fn chebyshev_is_minimal_on_the_interval() {
        let e = CompactSetModel::interval(-2.0, 2.0).unwrap();
        let seq: Vec<_> = [2, 4, 8, 16, 32, 64]
            .iter()
            .map(|&n| chebyshev_monic(n))
            .collect();
        let t = minimality_diagnostics(&seq, &e).unwrap();
        for row in &t.rows {
            assert_eq!(row.leading_term, 0.0);
            let expected = 2f64.ln() / row.degree as f64;
            assert!((row.supnorm_term - expected).abs() < 1e-6, "{row:?}");
        }
        assert!((t.supnorm_deviation - 0.0108).abs() < 1e-4);
        assert!(t.minimal());
    }

    #[test]
    fn cyclotomics_on_the_circle() {
        let e = CompactSetModel::circle(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let seq: Vec<_> = [5, 17, 53, 101].iter().map(|&n| cyclotomic(n)).collect();
        let t = minimality_diagnostics(&seq, &e).unwrap();
        assert!(t.rows.iter().all(|r| r.leading_term == 0.0));
        // ‖Φ_p‖ on the circle is p, attained at z = 1
        for (row, p) in t.rows.iter().zip([5.0f64, 17.0, 53.0, 101.0]) {
            assert!(
                (row.supnorm_term - p.ln() / (p - 1.0)).abs() < 1e-9,
                "{row:?}"
            );
        }
        assert!(t.minimal());
    }

    #[test]
    fn scaled_powers_fail_the_leading_condition() {
        let e = CompactSetModel::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let seq: Vec<_> = (1..=6)
            .map(|n| IntPolynomial::monomial(crate::polyarith::BigInt::from(2).pow(n as u32), n))
            .collect();
        let t = minimality_diagnostics(&seq, &e).unwrap();
        assert!(t
            .rows
            .iter()
            .all(|r| (r.leading_term - 2f64.ln()).abs() < 1e-12));
        assert!(!t.leading_ok);
        assert!(!t.minimal());
    }
}
