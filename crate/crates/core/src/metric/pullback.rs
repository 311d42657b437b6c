use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::klimek::{klimek_distance, GreenPair};
use crate::error::{Error, Result};
use crate::polyarith::{preimages, ComplexPolynomial, RootConfig};
use crate::potential::{CompactSetModel, DiscreteMeasure};

/// Cap on boundary samples of a pulled-back set.
pub const MAX_PULLBACK_SAMPLES: usize = 8192;
/// Cap on atoms of a pulled-back equilibrium measure.
pub const MAX_PULLBACK_ATOMS: usize = 4096;

/// `P^{-1}(E)`.
///
/// Boundary samples are the preimages of (a stride of) the boundary
/// samples of `E`. The Green function is `g_E(P(z)) / d` and the log
/// capacity `(log cap E - log |a_d|) / d`, both exact; the equilibrium
/// measure is the pullback of that of `E`.
pub fn pullback(p: &ComplexPolynomial, e: &CompactSetModel) -> Result<CompactSetModel> {
    let d = p.require_degree(2)?;
    let config = RootConfig::default();
    let map = p.factored(&config)?;
    let fiber = |z: Complex64, step: usize| {
        preimages(&map, z, &config).map_err(|err| Error::Preimage {
            step,
            source: Box::new(err),
        })
    };

    let base = e.boundary_samples();
    let stride = (base.len() * d).div_ceil(MAX_PULLBACK_SAMPLES).max(1);
    let mut samples = Vec::with_capacity(base.len() * d / stride + d);
    for (k, &z) in base.iter().enumerate().step_by(stride) {
        samples.extend(fiber(z, k)?);
    }

    let equilibrium = match e.equilibrium() {
        Ok(mu) => {
            let stride = (mu.len() * d).div_ceil(MAX_PULLBACK_ATOMS).max(1);
            let mut support = Vec::new();
            let mut weights = Vec::new();
            for (k, (z, w)) in mu.atoms().enumerate().step_by(stride) {
                for r in fiber(z, k)? {
                    support.push(r);
                    weights.push(w);
                }
            }
            Some(DiscreteMeasure::new(support, weights)?)
        }
        Err(_) => None,
    };
    let symmetric = e.symmetric() && p.is_real();
    Ok(CompactSetModel::from_pullback(
        map,
        e.clone(),
        samples,
        equilibrium,
        symmetric,
    ))
}

/// `P^{-n}(E)`.
pub fn iterated_pullback(
    p: &ComplexPolynomial,
    e: &CompactSetModel,
    n: usize,
) -> Result<CompactSetModel> {
    let mut cur = e.clone();
    for _ in 0..n {
        cur = pullback(p, &cur)?;
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionCheck {
    /// `Γ(P^{-1}E, P^{-1}F)`.
    pub lhs: f64,
    /// `Γ(E, F) / d`.
    pub rhs: f64,
    pub ok: bool,
}

pub const CONTRACTION_TOL: f64 = 1e-3;

/// Klimek's contraction `Γ(P^{-1}E, P^{-1}F) <= Γ(E, F) / d`.
pub fn contraction_check(
    p: &ComplexPolynomial,
    e: &CompactSetModel,
    f: &CompactSetModel,
) -> Result<ContractionCheck> {
    let d = p.require_degree(2)? as f64;
    let lhs = klimek_distance(&GreenPair::new(pullback(p, e)?, pullback(p, f)?))?.gamma;
    let rhs = klimek_distance(&GreenPair::new(e.clone(), f.clone()))?.gamma / d;
    Ok(ContractionCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + CONTRACTION_TOL,
    })
}
