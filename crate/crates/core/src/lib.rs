//! Frequency estimation for periodic signals observed at irregular instants.
//!
//! The observation model is `Y_j = s(X_j) + e_j`, where `s` is a real periodic
//! signal with fundamental frequency `f_star`, the instants `X_j` form a renewal
//! process and the `e_j` are i.i.d. Gaussian. This crate provides:
//!
//! - [`signal`]: periodic signals stored as Fourier coefficients, with
//!   evaluation, differentiation, products, norms and least-squares fitting.
//! - [`sampling`]: renewal sampling schemes (exponential, gamma, uniform
//!   inter-arrivals), their characteristic functions, and noisy observation.
//! - [`periodogram`]: the cumulated Lomb-Scargle periodogram, the harmonic
//!   Gram system and the least-squares residual criterion.
//! - [`estimator`]: grid maximization/minimization with optional parabolic
//!   refinement.
//! - [`asymptotics`]: the information bound and the asymptotic variance of
//!   the periodogram estimator.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel scans, file formats
//! and the Monte-Carlo harness live in the companion `cumlomb` crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is how NaN gets rejected; index loops mirror the textbook
// factorizations.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod estimator;
mod linalg;
pub mod periodogram;
pub mod sampling;
pub mod signal;

pub use num_complex::Complex64;

pub use asymptotics::{clsp_variance, information, AsymptoticReport};
pub use error::{Error, Result};
pub use estimator::{estimate, estimate_clsp, estimate_from_scan, estimate_ls, EstimateResult, FrequencyGrid, Method};
pub use periodogram::{clsp, clsp_grid, empirical_char_fn, gram_system, ls_criterion, GramSystem, HarmonicStack};
pub use sampling::{observe, sample_instants, snr_to_sigma, RenewalScheme, TimeSeries};
pub use signal::{fit_trig_poly, PeriodicSignal};
