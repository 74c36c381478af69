//! The std side of `cumlomb-core`: parallel grid scans, CSV/JSON formats,
//! the Monte-Carlo harness, and the `cumlomb` command-line tool.

pub mod error;
pub mod harness;
pub mod io;
pub mod scan;
pub mod stats;

pub use cumlomb_core as core;

pub use error::{Error, Result};
pub use harness::{phase_fold, report_table, run_experiment, ExperimentConfig, ExperimentOutcome, MethodStats};
pub use scan::{par_clsp_grid, par_estimate, par_scan};

const REFERENCE_SIGNAL_JSON: &str = include_str!("../data/reference_signal.json");

/// The shipped synthetic reference signal: a zero-mean degree-6
/// trigonometric polynomial at `f_star = 0.25` with a Cepheid-like falling
/// harmonic spectrum, scaled to AC power 0.049 so that 10 dB SNR means a
/// noise SD of 0.07. Coefficients are in `data/reference_signal.json`.
pub fn reference_signal() -> core::PeriodicSignal {
    io::signal_from_json(REFERENCE_SIGNAL_JSON).expect("shipped reference signal is valid")
}
