//! Polynomial dynamics: dynamical Green functions, filled Julia sets and
//! Brolin measures.

mod brolin;
mod green;
mod raster;

pub use brolin::{brolin_sample, DEFAULT_BURN_IN, ORBITS};
pub use green::{
    dyn_green, julia_capacity, julia_log_capacity, DynGreenEvaluator, GreenValue, LeadingTerm,
    DEFAULT_MAX_ITER,
};
pub use raster::{laplacian_crosscheck, raster, Bbox, JuliaRaster};
