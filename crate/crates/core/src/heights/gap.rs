use serde::Serialize;

use super::{canonical_evaluator, canonical_with, rumely_height, AlgebraicNumber};
use crate::error::Result;
use crate::metric::{klimek_distance, GreenPair, GreenSide};
use crate::polyarith::IntPolynomial;
use crate::potential::CompactSetModel;

/// Slack in `|ĥ_P(α) - h_E(α)| <= Γ(K_P, E) + slack`.
pub const GAP_TOL: f64 = 1e-3;
/// Brolin samples on the Julia side of each Γ.
pub const GAP_JULIA_SAMPLES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightGapRow {
    /// Index into the map sequence.
    pub n: usize,
    pub degree: usize,
    pub probe: String,
    pub canonical: f64,
    pub rumely: f64,
    /// `|ĥ_{P_n}(α) - h_E(α)|`.
    pub gap: f64,
    /// `Γ(K_{P_n}, E)`.
    pub gamma: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightGapTable {
    pub rows: Vec<HeightGapRow>,
}

impl HeightGapTable {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

/// Compares canonical heights of a map sequence with the Rumely height of
/// `E`. The finite parts agree, so the gap is the archimedean difference
/// and is bounded by the Klimek distance.
pub fn height_gap(
    seq: &[IntPolynomial],
    e: &CompactSetModel,
    probes: &[AlgebraicNumber],
) -> Result<HeightGapTable> {
    height_gap_seeded(seq, e, probes, 0)
}

pub fn height_gap_seeded(
    seq: &[IntPolynomial],
    e: &CompactSetModel,
    probes: &[AlgebraicNumber],
    seed: u64,
) -> Result<HeightGapTable> {
    let targets = probes
        .iter()
        .map(|a| rumely_height(a, e).map(|r| r.total))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (n, p) in seq.iter().enumerate() {
        let eval = canonical_evaluator(p)?;
        let degree = eval.degree();
        let heights: Vec<f64> = probes
            .iter()
            .map(|a| canonical_with(&eval, p, a).total)
            .collect();
        let gamma = klimek_distance(&GreenPair {
            left: GreenSide::julia(eval, GAP_JULIA_SAMPLES, seed)?,
            right: e.clone().into(),
        })?
        .gamma;
        for ((alpha, &canonical), &rumely) in probes.iter().zip(&heights).zip(&targets) {
            let gap = (canonical - rumely).abs();
            rows.push(HeightGapRow {
                n,
                degree,
                probe: alpha.to_string(),
                canonical,
                rumely,
                gap,
                gamma,
                ok: gap <= gamma + GAP_TOL,
            });
        }
    }
    Ok(HeightGapTable { rows })
}
