//! The Klimek metric `Γ(E, F) = ‖g_E - g_F‖_∞`, polynomial pullbacks, and
//! moment discrepancies between measures.

mod discrepancy;
mod klimek;
mod pullback;

pub use discrepancy::measure_discrepancy;
pub use klimek::{
    grid_audit, klimek_distance, Extremum, GreenPair, GreenSide, GridAudit, KlimekDistance,
    GRID_AUDIT_TOL, JULIA_SIDE_BURN_IN, MIN_SIDE_SAMPLES,
};
pub use pullback::{
    contraction_check, iterated_pullback, pullback, ContractionCheck, CONTRACTION_TOL,
    MAX_PULLBACK_ATOMS, MAX_PULLBACK_SAMPLES,
};
