//! Asymptotic variances of frequency estimators under renewal sampling.
//!
//! For a signal `s` with fundamental frequency `f*`, inter-arrival law with
//! mean `mu` and characteristic function `Phi`, and noise SD `sigma`:
//!
//! ```text
//! I*      = mu^2 / (12 sigma^2 f*) * int_0^{1/f*} s'(t)^2 dt
//! gamma   = sum_{k != 0} |c_k(s s')|^2 (1 - |Phi(2 pi k f*)|^2) / |1 - Phi(2 pi k f*)|^2
//! var_clsp = (1 / I*) * (1 + gamma / (sigma^2 sum_k |c_k(s')|^2))
//! ```
//!
//! `1 / I*` is the efficient variance of `n^{3/2} (f_hat - f*)`; the
//! periodogram estimator attains `var_clsp`, which is never smaller.

use alloc::format;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::sampling::RenewalScheme;
use crate::signal::PeriodicSignal;
use core::f64::consts::PI;

/// Bound on `|c_0(s s')|` relative to the coefficient scale. `s s'` is half
/// the derivative of `s^2`, so its mean vanishes; anything larger means the
/// coefficients are corrupt.
const MEAN_TRIPWIRE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AsymptoticReport {
    pub f_star: f64,
    /// Mean inter-arrival time.
    pub mu: f64,
    /// Noise SD.
    pub sigma: f64,
    /// Information `I*`; `1 / I*` is the optimal asymptotic variance.
    pub i_star: f64,
    /// Asymptotic variance of the periodogram estimator.
    pub sigma_check_sq: f64,
    /// Weighted energy of `s s'` driving the excess variance.
    pub gamma_series: f64,
    /// `sum_k |c_k(s')|^2`.
    pub derivative_energy: f64,
    /// Highest harmonic of `s s'` entering `gamma_series`.
    pub truncation_k: usize,
    /// Bound on the dropped tail; zero for finite-degree signals.
    pub truncation_residual: f64,
}

impl AsymptoticReport {
    /// `n^{-3/2} I*^{-1/2}`: standard deviation of an efficient estimator.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn optimal_sd(&self, n: usize) -> f64 {
        assert!(n >= 1, "sample count must be positive");
        (n as f64).powf(-1.5) / self.i_star.sqrt()
    }

    /// `n^{-3/2} sigma_check / ell`: predicted standard deviation of the
    /// periodogram estimate of `f* / ell`.
    ///
    /// # Panics
    /// If `n == 0` or `ell == 0`.
    pub fn predicted_clsp_sd(&self, n: usize, ell: usize) -> f64 {
        assert!(n >= 1, "sample count must be positive");
        assert!(ell >= 1, "sub-multiple index must be positive");
        (n as f64).powf(-1.5) * self.sigma_check_sq.sqrt() / ell as f64
    }

    /// `sigma_check_sq * i_star`, at least one.
    pub fn efficiency_gap(&self) -> f64 {
        self.sigma_check_sq * self.i_star
    }
}

fn check_noise(mu: f64, sigma: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidInput(format!("mean inter-arrival must be positive, got {mu}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidInput(format!("noise SD must be positive, got {sigma}")));
    }
    Ok(())
}

/// Information `I*`, from the derivative coefficients via Parseval.
pub fn information(signal: &PeriodicSignal, mu: f64, sigma: f64) -> Result<f64> {
    check_noise(mu, sigma)?;
    let energy = signal.derivative().coeff_energy();
    if !(energy > 0.0) {
        return Err(Error::ZeroInformation);
    }
    let f = signal.f_star();
    Ok(mu * mu * energy / (12.0 * sigma * sigma * f * f))
}

/// Full asymptotic report for the periodogram estimator. Every sum is finite
/// (at most `2d` harmonics of `s s'`), so nothing is truncated.
pub fn clsp_variance(signal: &PeriodicSignal, scheme: &RenewalScheme, sigma: f64) -> Result<AsymptoticReport> {
    let scheme = scheme.validated()?;
    let mu = scheme.mean();
    let i_star = information(signal, mu, sigma)?;

    let ds = signal.derivative();
    let sds = signal.product(&ds)?;
    let scale: f64 = (0..=signal.degree() as i64)
        .map(|k| signal.coeff(k).norm() * ds.coeff(k).norm())
        .sum();
    if sds.coeff(0).norm() > MEAN_TRIPWIRE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Consistency(format!(
            "mean of s*s' is {} instead of zero",
            sds.coeff(0)
        )));
    }

    let f = signal.f_star();
    let mut gamma_series = 0.0;
    for (k, c) in sds.coeffs().iter().enumerate().skip(1) {
        let energy = c.norm_sqr();
        if energy > 0.0 {
            // the k and -k terms share |c_k| and the weight (Phi(-t) = conj Phi(t))
            gamma_series += 2.0 * energy * scheme.harmonic_weight(2.0 * PI * k as f64 * f);
        }
    }
    let derivative_energy = ds.coeff_energy();
    let sigma_check_sq = (1.0 + gamma_series / (sigma * sigma * derivative_energy)) / i_star;

    Ok(AsymptoticReport {
        f_star: f,
        mu,
        sigma,
        i_star,
        sigma_check_sq,
        gamma_series,
        derivative_energy,
        truncation_k: sds.degree(),
        truncation_residual: 0.0,
    })
}
