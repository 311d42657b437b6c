use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::green::DynGreenEvaluator;
use crate::error::{Error, Result};
use crate::potential::DiscreteMeasure;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bbox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Bbox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let b = Bbox {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        if !(re_min < re_max && im_min < im_max)
            || ![re_min, re_max, im_min, im_max]
                .iter()
                .all(|x| x.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "degenerate bounding box {b:?}"
            )));
        }
        Ok(b)
    }

    /// Square box of half-width `r` about the origin.
    pub fn centered(r: f64) -> Result<Self> {
        Self::new(-r, r, -r, r)
    }
}

/// Grid of `g_P` values; row 0 is the top edge (`im_max`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JuliaRaster {
    pub bbox: Bbox,
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
    /// Pixels whose orbit neither escaped nor was decided within `max_iter`.
    pub undecided: Vec<bool>,
    pub max_iter: usize,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    bbox: &'a Bbox,
    width: usize,
    height: usize,
    g_max: f64,
    max_iter: usize,
    undecided_pixels: usize,
}

impl JuliaRaster {
    pub fn pixel_center(&self, i: usize, j: usize) -> Complex64 {
        pixel_center(&self.bbox, self.width, self.height, i, j)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.width + i]
    }

    /// Pixel belongs to `K_P` (value exactly zero).
    pub fn member(&self, i: usize, j: usize) -> bool {
        self.value(i, j) == 0.0
    }

    pub fn pixel_area(&self) -> f64 {
        (self.bbox.re_max - self.bbox.re_min) * (self.bbox.im_max - self.bbox.im_min)
            / (self.width * self.height) as f64
    }

    /// Area of the member pixels.
    pub fn filled_area(&self) -> f64 {
        self.values.iter().filter(|&&v| v == 0.0).count() as f64 * self.pixel_area()
    }

    pub fn g_max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Binary 8-bit PGM, `round(255 min(1, g / g_max))`.
    pub fn write_pgm(&self, mut out: impl Write) -> std::io::Result<()> {
        let g_max = self.g_max();
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self
            .values
            .iter()
            .map(|&v| {
                if g_max > 0.0 {
                    (255.0 * (v / g_max).min(1.0)).round() as u8
                } else {
                    0
                }
            })
            .collect();
        out.write_all(&bytes)
    }

    /// Writes `<stem>.pgm` and `<stem>.json` (bbox, `g_max`, ...).
    pub fn save(&self, pgm: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_pgm(&mut buf).map_err(|e| Error::io(pgm, e))?;
        std::fs::write(pgm, buf).map_err(|e| Error::io(pgm, e))?;
        let side = pgm.with_extension("json");
        let meta = Sidecar {
            bbox: &self.bbox,
            width: self.width,
            height: self.height,
            g_max: self.g_max(),
            max_iter: self.max_iter,
            undecided_pixels: self.undecided.iter().filter(|&&u| u).count(),
        };
        let text = serde_json::to_string_pretty(&meta)?;
        std::fs::write(&side, text).map_err(|e| Error::io(&side, e))
    }
}

fn pixel_center(b: &Bbox, w: usize, h: usize, i: usize, j: usize) -> Complex64 {
    let dx = (b.re_max - b.re_min) / w as f64;
    let dy = (b.im_max - b.im_min) / h as f64;
    Complex64::new(
        b.re_min + (i as f64 + 0.5) * dx,
        b.im_max - (j as f64 + 0.5) * dy,
    )
}

/// Evaluates `g_P` at every pixel center (rows in parallel).
pub fn raster(
    eval: &DynGreenEvaluator,
    bbox: Bbox,
    width: usize,
    height: usize,
) -> Result<JuliaRaster> {
    if width < 16 || height < 16 {
        return Err(Error::InvalidInput(format!(
            "raster resolution must be at least 16x16, got {width}x{height}"
        )));
    }
    let rows: Vec<Vec<(f64, bool)>> = (0..height)
        .into_par_iter()
        .map(|j| {
            (0..width)
                .map(|i| {
                    let g = eval.eval(pixel_center(&bbox, width, height, i, j));
                    (g.value, !g.escaped)
                })
                .collect()
        })
        .collect();
    let (values, undecided) = rows.into_iter().flatten().unzip();
    Ok(JuliaRaster {
        bbox,
        width,
        height,
        values,
        undecided,
        max_iter: eval.max_iter(),
    })
}

/// Brolin measure as the positive part of the five-point Laplacian of a
/// `g_P` raster, normalized to mass one.
pub fn laplacian_crosscheck(
    eval: &DynGreenEvaluator,
    bbox: Bbox,
    width: usize,
    height: usize,
) -> Result<DiscreteMeasure> {
    if width < 128 || height < 128 {
        return Err(Error::InvalidInput(format!(
            "Laplacian cross-check needs at least 128x128 pixels, got {width}x{height}"
        )));
    }
    let r = raster(eval, bbox, width, height)?;
    let on_edge = |i: usize, j: usize| i == 0 || j == 0 || i + 1 == width || j + 1 == height;
    for j in 0..height {
        for i in 0..width {
            if on_edge(i, j) && r.member(i, j) {
                return Err(Error::RasterBoundary);
            }
        }
    }
    let dx = (bbox.re_max - bbox.re_min) / width as f64;
    let dy = (bbox.im_max - bbox.im_min) / height as f64;
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for j in 1..height - 1 {
        for i in 1..width - 1 {
            let g = r.value(i, j);
            let lap = (r.value(i + 1, j) + r.value(i - 1, j) - 2.0 * g) / (dx * dx)
                + (r.value(i, j + 1) + r.value(i, j - 1) - 2.0 * g) / (dy * dy);
            if lap > 0.0 {
                support.push(r.pixel_center(i, j));
                weights.push(lap * dx * dy);
            }
        }
    }
    DiscreteMeasure::new(support, weights)
}
