use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::set_model::{CompactSetModel, SetKind, SetOptions};
use crate::error::{Error, Result};

/// Configuration form of a compact set, e.g.
/// `set = { kind = "interval", a = -2, b = 2 }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetSpec {
    Interval {
        a: f64,
        b: f64,
    },
    Disk {
        #[serde(default)]
        center: [f64; 2],
        r: f64,
    },
    Circle {
        #[serde(default)]
        center: [f64; 2],
        r: f64,
    },
    UnionOfIntervals {
        intervals: Vec<[f64; 2]>,
    },
    #[serde(alias = "polyline")]
    PolylineBoundary {
        points: Vec<[f64; 2]>,
    },
    PointCloud {
        #[serde(default)]
        points: Vec<[f64; 2]>,
        /// CSV of `re,im` rows, relative to the config file.
        #[serde(default)]
        csv: Option<PathBuf>,
    },
}

#[derive(Deserialize)]
struct Wrapped {
    set: SetSpec,
}

fn pt(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl SetSpec {
    /// Parses TOML or JSON, either bare or under a `set` key.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            if let Ok(w) = serde_json::from_str::<Wrapped>(text) {
                return Ok(w.set);
            }
            return serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()));
        }
        if let Ok(w) = toml::from_str::<Wrapped>(text) {
            return Ok(w.set);
        }
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut spec = Self::parse(&text)?;
        if let SetSpec::PointCloud { csv: Some(csv), .. } = &mut spec {
            if csv.is_relative() {
                if let Some(dir) = path.parent() {
                    *csv = dir.join(&*csv);
                }
            }
        }
        Ok(spec)
    }

    pub fn kind(&self) -> Result<SetKind> {
        Ok(match self {
            SetSpec::Interval { a, b } => SetKind::Interval { a: *a, b: *b },
            SetSpec::Disk { center, r } => SetKind::Disk {
                center: pt(*center),
                radius: *r,
            },
            SetSpec::Circle { center, r } => SetKind::Circle {
                center: pt(*center),
                radius: *r,
            },
            SetSpec::UnionOfIntervals { intervals } => {
                SetKind::IntervalUnion(intervals.iter().map(|i| (i[0], i[1])).collect())
            }
            SetSpec::PolylineBoundary { points } => {
                SetKind::Polyline(points.iter().copied().map(pt).collect())
            }
            SetSpec::PointCloud { points, csv } => {
                let mut all: Vec<Complex64> = points.iter().copied().map(pt).collect();
                if let Some(path) = csv {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                    all.extend(parse_point_csv(&text)?);
                }
                SetKind::PointCloud(all)
            }
        })
    }

    pub fn build(&self, options: SetOptions) -> Result<CompactSetModel> {
        CompactSetModel::build(self.kind()?, options)
    }
}

/// Rows of `re,im`; a non-numeric first line is taken as a header, and
/// blank lines and `#` comments are skipped.
pub fn parse_point_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let parsed = match (fields.next(), fields.next()) {
            (Some(re), Some(im)) => re.parse::<f64>().ok().zip(im.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((re, im)) => out.push(Complex64::new(re, im)),
            None if out.is_empty() && k == 0 => continue,
            None => {
                return Err(Error::Parse(format!(
                    "line {}: expected `re,im`, got {line:?}",
                    k + 1
                )))
            }
        }
    }
    Ok(out)
}
