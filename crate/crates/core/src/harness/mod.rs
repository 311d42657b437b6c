//! Experiment configuration, orchestration and report emission.
//!
//! An [`ExperimentSpec`] names a target set, a polynomial family and
//! degree checkpoints; [`run`] evaluates the checkpoints in parallel and
//! merges them in degree order into a [`Report`], and [`emit`] writes it
//! out. Assertion failures are recorded in [`Report::violations`], never
//! dropped.

mod emit;
mod experiments;
mod report;
mod spec;

pub use emit::emit;
pub use experiments::{
    run, run_bilu_rumely, run_dynamical_fs, run_runaway, CAPACITY_SLACK, DISCREPANCY_FLOOR,
    GAMMA_FLOOR, PROBE_GAP_TOL, RUNAWAY_REL_TOL,
};
pub use report::{check_decreasing, check_increasing, Cell, Report, Table, Violation};
pub use spec::{
    parse_probe, ExperimentKind, ExperimentSpec, Family, Ladder, Member, OutputFormat,
    DEFAULT_LADDER,
};

/// `x` rounded to 12 significant digits, in the shortest decimal form.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap();
    let a = rounded.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}
