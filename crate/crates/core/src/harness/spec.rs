use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::heights::AlgebraicNumber;
use crate::polyarith::{
    chebyshev_monic, cyclotomic, parse_rational, runaway_family, IntPolynomial,
};
use crate::potential::{SetOptions, SetSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BiluRumely,
    DynamicalFs,
    Runaway,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BiluRumely => "bilu-rumely",
            ExperimentKind::DynamicalFs => "dynamical-fs",
            ExperimentKind::Runaway => "runaway",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "bilu-rumely" => Ok(ExperimentKind::BiluRumely),
            "dynamical-fs" => Ok(ExperimentKind::DynamicalFs),
            "runaway" => Ok(ExperimentKind::Runaway),
            other => Err(Error::Parse(format!(
                "unknown experiment {other:?}; expected bilu-rumely, dynamical-fs or runaway"
            ))),
        }
    }
}

/// Polynomial family indexed by `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Φ_n`, of degree `φ(n)`.
    Cyclotomic,
    /// `2 T_n(z/2)`.
    Chebyshev,
    /// `z^n`.
    PowerMaps,
    /// `z^n + z`.
    PowerPlusZ,
    /// `x^n - ⌊e^{√n}⌋ x^{n-1} + 1`.
    Runaway,
    /// The `polys` list, indexed from 1.
    User,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Pgm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ladder {
    /// `lo, 2 lo, 4 lo, ...` up to `hi`.
    Geometric,
    /// Every integer in `[lo, hi]`.
    Linear,
}

fn default_outputs() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

fn default_brolin_samples() -> usize {
    4096
}

fn default_moments() -> u32 {
    8
}

fn default_raster_size() -> usize {
    256
}

/// Default degree checkpoints.
pub const DEFAULT_LADDER: [u64; 6] = [4, 8, 16, 32, 64, 128];

/// An experiment configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    /// May instead be given on the command line.
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    /// Target set; unused by the runaway experiment.
    #[serde(default)]
    pub set: Option<SetSpec>,
    pub family: Family,
    /// Explicit checkpoints; overrides `degree_range`.
    #[serde(default)]
    pub degrees: Option<Vec<u64>>,
    #[serde(default)]
    pub degree_range: Option<[u64; 2]>,
    /// Defaults to linear for the runaway experiment, geometric otherwise.
    #[serde(default)]
    pub ladder: Option<Ladder>,
    /// Rationals (`3`, `5/2`, `0.25`) or ascending minimal polynomial
    /// coefficients (`-1 -1 1`).
    #[serde(default)]
    pub probes: Vec<String>,
    /// Ascending coefficients for the `user` family.
    #[serde(default)]
    pub polys: Vec<String>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputFormat>,
    #[serde(default)]
    pub seed: u64,
    /// Neighborhood radius for the dynamical-fs experiment.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Degrees not started within this many seconds are skipped.
    #[serde(default)]
    pub budget_seconds: Option<f64>,
    #[serde(default = "default_brolin_samples")]
    pub brolin_samples: usize,
    #[serde(default = "default_moments")]
    pub moments: u32,
    #[serde(default = "default_raster_size")]
    pub raster_size: usize,
    #[serde(default)]
    pub set_options: SetOptions,
}

/// One family member.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub n: u64,
    pub poly: IntPolynomial,
}

impl ExperimentSpec {
    /// A spec with defaults for everything but the name and family.
    pub fn new(name: impl Into<String>, family: Family) -> Self {
        ExperimentSpec {
            name: name.into(),
            experiment: None,
            set: None,
            family,
            degrees: None,
            degree_range: None,
            ladder: None,
            probes: Vec::new(),
            polys: Vec::new(),
            outputs: default_outputs(),
            seed: 0,
            epsilon: None,
            budget_seconds: None,
            brolin_samples: default_brolin_samples(),
            moments: default_moments(),
            raster_size: default_raster_size(),
            set_options: SetOptions::default(),
        }
    }

    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let spec: Self = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a config file; a point-cloud CSV path is taken relative to it.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut spec = Self::parse(&text)?;
        if let Some(SetSpec::PointCloud { csv: Some(csv), .. }) = &mut spec.set {
            if csv.is_relative() {
                if let Some(dir) = path.parent() {
                    *csv = dir.join(&*csv);
                }
            }
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad(format!(
                "experiment name {:?} must be a nonempty file stem",
                self.name
            ));
        }
        if let Some([lo, hi]) = self.degree_range {
            if lo > hi {
                return bad(format!("degree range [{lo}, {hi}] is empty"));
            }
        }
        if let Some(d) = &self.degrees {
            if d.is_empty() {
                return bad("degree list is empty".into());
            }
        }
        if self.family == Family::User && self.polys.is_empty() {
            return bad("the user family needs a nonempty `polys` list".into());
        }
        if self.brolin_samples < 256 || self.moments == 0 || self.raster_size < 16 {
            return bad("need brolin_samples >= 256, moments >= 1 and raster_size >= 16".into());
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0) {
                return bad(format!("epsilon must be positive, got {eps}"));
            }
        }
        Ok(())
    }

    /// The experiment to run: the config's unless `cli` overrides it.
    pub fn kind(&self, cli: Option<ExperimentKind>) -> Result<ExperimentKind> {
        match (self.experiment, cli) {
            (Some(a), Some(b)) if a != b => Err(Error::InvalidInput(format!(
                "config is a {} experiment but {} was requested",
                a.name(),
                b.name()
            ))),
            (_, Some(k)) | (Some(k), None) => Ok(k),
            (None, None) => Err(Error::Missing(
                "no experiment kind in config or command line".into(),
            )),
        }
    }

    /// Checkpoints, sorted and deduplicated.
    pub fn checkpoints(&self, kind: ExperimentKind) -> Vec<u64> {
        let mut out = match (&self.degrees, self.degree_range) {
            (Some(d), _) => d.clone(),
            (None, range) => {
                let ladder = self.ladder.unwrap_or(match kind {
                    ExperimentKind::Runaway => Ladder::Linear,
                    _ => Ladder::Geometric,
                });
                match (range, ladder) {
                    (None, Ladder::Geometric) => DEFAULT_LADDER.to_vec(),
                    (None, Ladder::Linear) => (4..=12).collect(),
                    (Some([lo, hi]), Ladder::Linear) => (lo..=hi).collect(),
                    (Some([lo, hi]), Ladder::Geometric) => {
                        std::iter::successors(Some(lo.max(1)), |&k| k.checked_mul(2))
                            .take_while(|&k| k <= hi)
                            .collect()
                    }
                }
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Family members at the checkpoints (every listed polynomial for the
    /// user family).
    pub fn members(&self, kind: ExperimentKind) -> Result<Vec<Member>> {
        if self.family == Family::User {
            return self
                .polys
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    Ok(Member {
                        n: k as u64 + 1,
                        poly: s.parse()?,
                    })
                })
                .collect();
        }
        self.checkpoints(kind)
            .into_iter()
            .map(|n| {
                let poly = match self.family {
                    Family::Cyclotomic => cyclotomic(n.max(1)),
                    Family::Chebyshev => chebyshev_monic(n as usize),
                    Family::PowerMaps => IntPolynomial::monomial(1, n as usize),
                    Family::PowerPlusZ => {
                        &IntPolynomial::monomial(1, n as usize) + &IntPolynomial::monomial(1, 1)
                    }
                    Family::Runaway => runaway_family(n)?,
                    Family::User => unreachable!(),
                };
                Ok(Member { n, poly })
            })
            .collect()
    }

    pub fn parsed_probes(&self) -> Result<Vec<AlgebraicNumber>> {
        self.probes.iter().map(|s| parse_probe(s)).collect()
    }

    /// SHA-256 of the canonical JSON form, so formatting and key order in
    /// the source file do not matter.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("spec serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn set_spec(&self) -> Result<&SetSpec> {
        self.set
            .as_ref()
            .ok_or_else(|| Error::Missing("experiment needs a `set` block".into()))
    }
}

/// A rational, or a minimal polynomial as ascending coefficients.
pub fn parse_probe(s: &str) -> Result<AlgebraicNumber> {
    if s.split_whitespace().count() > 1 {
        AlgebraicNumber::from_minpoly(&s.parse()?)
    } else {
        Ok(AlgebraicNumber::rational(&parse_rational(s)?))
    }
}
