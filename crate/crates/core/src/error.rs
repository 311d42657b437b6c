use std::path::PathBuf;

use num_complex::Complex64;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("root finder did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        best: Vec<Complex64>,
        residual: f64,
    },

    #[error("the zero polynomial has no roots or degree")]
    ZeroPolynomial,

    #[error("polynomial degree {got} is below the required minimum {min}")]
    DegreeTooSmall { got: usize, min: usize },

    #[error("exact orbit exceeded the digit cap at step {step}: {bits} bits > {cap}")]
    DigitCap { step: usize, bits: u64, cap: u64 },

    #[error("requested {requested} points but only {available} samples are available")]
    TooFewSamples { requested: usize, available: usize },

    #[error("degenerate compact set: {0}")]
    Degenerate(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("canonical height needs a monic integer polynomial (good reduction at every finite place); leading coefficient is {leading}")]
    NonMonic { leading: String },

    #[error("target set has capacity {capacity:.6} < 1: filled Julia sets of monic integer polynomials have cap(K_P) = 1, and cap(K_P) <= 1 for every integer polynomial")]
    CapacityObstruction { capacity: f64 },

    #[error("backward step {step}: {source}")]
    Preimage {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("filled Julia set touches the raster boundary; enlarge the bounding box")]
    RasterBoundary,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
