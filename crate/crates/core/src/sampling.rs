//! Renewal sampling schemes and the additive Gaussian observation model.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::signal::PeriodicSignal;

/// Law of the i.i.d. inter-arrival times `V_k`; the sampling instants are
/// `X_j = V_1 + ... + V_j`.
///
/// Every supported law has a density and a characteristic function bounded
/// away from one outside the origin, and finite moments of all orders.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "law", rename_all = "snake_case"))]
pub enum RenewalScheme {
    /// Poisson sampling, mean `1 / rate`.
    Exponential { rate: f64 },
    /// Mean `shape / rate`.
    Gamma { shape: f64, rate: f64 },
    /// Uniform on `[low, high]`.
    Uniform { low: f64, high: f64 },
}

impl RenewalScheme {
    pub fn exponential(rate: f64) -> Result<Self> {
        RenewalScheme::Exponential { rate }.validated()
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        RenewalScheme::Gamma { shape, rate }.validated()
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        RenewalScheme::Uniform { low, high }.validated()
    }

    /// Checks the parameters; useful after deserialization.
    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            RenewalScheme::Exponential { rate } => rate.is_finite() && rate > 0.0,
            RenewalScheme::Gamma { shape, rate } => {
                shape.is_finite() && shape > 0.0 && rate.is_finite() && rate > 0.0
            }
            RenewalScheme::Uniform { low, high } => low.is_finite() && high.is_finite() && 0.0 <= low && low < high,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidInput(format!("invalid renewal scheme parameters: {self:?}")))
        }
    }

    /// `E[V_1]`.
    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    /// Raw moment `E[V_1^m]`.
    pub fn moment(&self, m: u32) -> f64 {
        match *self {
            RenewalScheme::Exponential { rate } => {
                (1..=m).map(|i| i as f64).product::<f64>() / rate.powi(m as i32)
            }
            RenewalScheme::Gamma { shape, rate } => {
                (0..m).map(|i| shape + i as f64).product::<f64>() / rate.powi(m as i32)
            }
            RenewalScheme::Uniform { low, high } => {
                let p = m as i32 + 1;
                (high.powi(p) - low.powi(p)) / (p as f64 * (high - low))
            }
        }
    }

    /// Characteristic function `E[exp(i t V_1)]`, in closed form.
    pub fn char_fn(&self, t: f64) -> Complex64 {
        match *self {
            RenewalScheme::Exponential { rate } => {
                Complex64::new(rate, 0.0) / Complex64::new(rate, -t)
            }
            RenewalScheme::Gamma { shape, rate } => {
                // (1 - i t / rate)^(-shape), principal branch (Re > 0)
                let z = Complex64::new(1.0, -t / rate);
                let log = Complex64::new(z.norm().ln(), z.arg());
                (log * -shape).exp()
            }
            RenewalScheme::Uniform { low, high } => {
                let half = 0.5 * t * (high - low);
                let sinc = if half.abs() < 1e-8 {
                    1.0 - half * half / 6.0
                } else {
                    half.sin() / half
                };
                Complex64::from_polar(sinc, 0.5 * t * (high + low))
            }
        }
    }

    /// `(1 - |Phi(t)|^2) / |1 - Phi(t)|^2`, the weight a harmonic at angular
    /// frequency `t` receives in the periodogram variance. Identically 1 for
    /// exponential inter-arrivals. Undefined at `t = 0`.
    pub fn harmonic_weight(&self, t: f64) -> f64 {
        let phi = self.char_fn(t);
        (1.0 - phi.norm_sqr()) / (Complex64::new(1.0, 0.0) - phi).norm_sqr()
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let v = match *self {
                RenewalScheme::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
                RenewalScheme::Gamma { shape, rate } => {
                    Gamma::new(shape, 1.0 / rate).expect("validated gamma").sample(rng)
                }
                RenewalScheme::Uniform { low, high } => {
                    Uniform::new_inclusive(low, high).expect("validated interval").sample(rng)
                }
            };
            // zero-length gaps would break strict monotonicity
            if v > 0.0 {
                return v;
            }
        }
    }
}

/// Paired observation instants and values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Times must be finite, positive and strictly increasing; values finite.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidInput("empty time series".into()));
        }
        if let Some(i) = times.iter().position(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidInput(format!("time {} at row {i} is not finite and positive", times[i])));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!("times not strictly increasing at row {}", i + 1)));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value at row {i}")));
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Same instants, values replaced.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(self.times.clone(), values)
    }
}

/// Free-function form of [`RenewalScheme::char_fn`].
pub fn char_fn(scheme: &RenewalScheme, t: f64) -> Complex64 {
    scheme.char_fn(t)
}

/// First `n` instants of the renewal process, deterministic in `seed`.
///
/// The generator is ChaCha8 seeded through `seed_from_u64`; inter-arrivals
/// come from `rand_distr` (ziggurat exponential, Marsaglia-Tsang gamma).
pub fn sample_instants(scheme: &RenewalScheme, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0;
    (0..n)
        .map(|_| {
            t += scheme.draw(&mut rng);
            t
        })
        .collect()
}

/// Noisy observations `Y_j = s(X_j) + sigma * Z_j` with `Z_j` standard normal
/// (`rand_distr` ziggurat over ChaCha8 seeded with `seed`).
pub fn observe(signal: &PeriodicSignal, times: &[f64], sigma: f64, seed: u64) -> Result<TimeSeries> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidInput(format!("noise SD must be finite and non-negative, got {sigma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = times
        .iter()
        .map(|&t| {
            let z: f64 = StandardNormal.sample(&mut rng);
            signal.eval(t) + sigma * z
        })
        .collect();
    TimeSeries::new(times.to_vec(), values)
}

/// Noise SD giving the requested SNR, where SNR is the AC power of the
/// signal over the noise variance, in decibels.
pub fn snr_to_sigma(signal: &PeriodicSignal, snr_db: f64) -> Result<f64> {
    if !snr_db.is_finite() {
        return Err(Error::InvalidInput(format!("SNR must be finite, got {snr_db}")));
    }
    let power = signal.ac_power();
    if !(power > 0.0) {
        return Err(Error::UndefinedSnr);
    }
    Ok((power * 10f64.powf(-snr_db / 10.0)).sqrt())
}
