//! Monte-Carlo experiments: simulate replicates, estimate with every
//! configured method on the same data, and compare the spread of the
//! estimates with the asymptotic theory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cumlomb_core::estimator::check_method;
use cumlomb_core::{
    clsp_variance, estimate, fit_trig_poly, observe, sample_instants, snr_to_sigma, AsymptoticReport, FrequencyGrid,
    Method, PeriodicSignal, RenewalScheme, TimeSeries,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt};
use crate::io::{read_series_file, SignalDoc};
use crate::stats::mean_sd;

/// Odd constant of the splitmix64 generator.
pub const SEED_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 finalizer applied to `x + SEED_GAMMA`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(SEED_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `r`: `base_seed ^ splitmix64(r)`. Instants are drawn
/// from this seed, noise from `splitmix64` of it.
pub fn replicate_seed(base_seed: u64, r: usize) -> u64 {
    base_seed ^ splitmix64(r as u64)
}

/// Where the true signal comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalSpec {
    /// `"reference"`: the shipped synthetic reference signal.
    Named(String),
    /// Degree-`degree` fit to a light curve at a known period.
    Fit { fit: FitSpec },
    Inline(SignalDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    pub input: PathBuf,
    pub period: f64,
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub method: Method,
    #[serde(rename = "K")]
    pub k: usize,
}

/// Experiment description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub signal: SignalSpec,
    pub scheme: RenewalScheme,
    pub n: usize,
    /// Noise SD; give exactly one of `sigma` and `snr_db`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    pub grid: FrequencyGrid,
    pub methods: Vec<MethodSpec>,
    pub replicates: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub refine: bool,
    /// Keep every replicate's estimate in the output.
    #[serde(default)]
    pub keep_replicates: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("experiment config: {e}")))
    }

    /// Relative light-curve paths are taken relative to the config file.
    pub fn from_file(path: &Path) -> Result<(Self, Option<PathBuf>)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        Ok((Self::from_json(&text)?, path.parent().map(Path::to_path_buf)))
    }

    /// Validates everything before any simulation runs.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<Experiment> {
        if self.replicates == 0 {
            return Err(Error::config("replicates must be at least 1"));
        }
        if self.n == 0 {
            return Err(Error::config("n must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("no methods configured"));
        }
        for m in &self.methods {
            check_method(m.method, m.k, self.n).map_err(Error::config)?;
        }
        let scheme = self.scheme.validated().map_err(Error::config)?;
        let grid = self.grid.validated().map_err(Error::config)?;
        let signal = resolve_signal(&self.signal, base_dir)?;
        if signal.is_constant() {
            return Err(Error::config("signal is constant; there is no frequency to estimate"));
        }
        let sigma = match (self.sigma, self.snr_db) {
            (Some(s), None) if s.is_finite() && s >= 0.0 => s,
            (Some(s), None) => return Err(Error::config(format!("sigma must be finite and non-negative, got {s}"))),
            (None, Some(db)) if db.is_finite() => snr_to_sigma(&signal, db).map_err(Error::config)?,
            (None, Some(db)) => return Err(Error::config(format!("snr_db must be finite, got {db}"))),
            _ => return Err(Error::config("give exactly one of sigma and snr_db")),
        };
        let ell = target_submultiple(signal.f_star(), &grid)?;

        let mut warnings = Vec::new();
        let theory = theory_report(&signal, &scheme, sigma, &mut warnings);
        if let Some(h) = common_harmonic(&signal) {
            warnings.push(format!(
                "every nonzero harmonic is a multiple of {h}: the smallest period is 1/({h} f_star), not 1/f_star"
            ));
        }
        if let Some(t) = &theory {
            let predicted = t.predicted_clsp_sd(self.n, ell);
            if !self.refine && grid.mesh() > predicted {
                warnings.push(format!(
                    "grid mesh {:e} exceeds the predicted periodogram SD {predicted:.3e}; estimates will be quantized",
                    grid.mesh()
                ));
            }
        }

        Ok(Experiment {
            signal,
            scheme,
            n: self.n,
            sigma,
            snr_db: self.snr_db,
            grid,
            methods: self.methods.clone(),
            replicates: self.replicates,
            base_seed: self.base_seed,
            refine: self.refine,
            keep_replicates: self.keep_replicates,
            ell,
            theory,
            warnings,
        })
    }
}

fn resolve_signal(spec: &SignalSpec, base_dir: Option<&Path>) -> Result<PeriodicSignal> {
    match spec {
        SignalSpec::Named(name) if name == "reference" => Ok(crate::reference_signal()),
        SignalSpec::Named(name) => Err(Error::config(format!("unknown signal {name:?} (the only named signal is \"reference\")"))),
        SignalSpec::Inline(doc) => doc.to_signal().map_err(|e| Error::config(e.to_string())),
        SignalSpec::Fit { fit } => {
            if !(fit.period.is_finite() && fit.period > 0.0) {
                return Err(Error::config(format!("fit period must be positive, got {}", fit.period)));
            }
            let path = match base_dir {
                Some(dir) if fit.input.is_relative() => dir.join(&fit.input),
                _ => fit.input.clone(),
            };
            let data = read_series_file(&path)?;
            fit_trig_poly(data.times(), data.values(), 1.0 / fit.period, fit.degree).or_data("fit")
        }
    }
}

/// The unique `ell` with `f_star / ell` inside the band.
fn target_submultiple(f_star: f64, grid: &FrequencyGrid) -> Result<usize> {
    let lo = (f_star / grid.f_max()).ceil().max(1.0) as usize;
    let hi = (f_star / grid.f_min()).floor() as usize;
    match hi.checked_sub(lo) {
        Some(0) => Ok(lo),
        None => Err(Error::config(format!(
            "band [{}, {}] contains no sub-multiple of f_star = {f_star}",
            grid.f_min(),
            grid.f_max()
        ))),
        Some(_) => Err(Error::config(format!(
            "band [{}, {}] contains f_star/{lo} through f_star/{hi}; narrow it to isolate one",
            grid.f_min(),
            grid.f_max()
        ))),
    }
}

fn common_harmonic(signal: &PeriodicSignal) -> Option<usize> {
    let scale = signal.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let g = signal
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.norm() > 1e-12 * scale)
        .fold(0, |g, (k, _)| gcd(g, k));
    (g > 1).then_some(g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn theory_report(
    signal: &PeriodicSignal,
    scheme: &RenewalScheme,
    sigma: f64,
    warnings: &mut Vec<String>,
) -> Option<AsymptoticReport> {
    if sigma == 0.0 {
        warnings.push("noise-free experiment: no asymptotic report (the information is infinite)".into());
        return None;
    }
    match clsp_variance(signal, scheme, sigma) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(format!("asymptotic report unavailable: {e}"));
            None
        }
    }
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub signal: PeriodicSignal,
    pub scheme: RenewalScheme,
    pub n: usize,
    pub sigma: f64,
    pub snr_db: Option<f64>,
    pub grid: FrequencyGrid,
    pub methods: Vec<MethodSpec>,
    pub replicates: usize,
    pub base_seed: u64,
    pub refine: bool,
    pub keep_replicates: bool,
    /// The estimation target is `f_star / ell`.
    pub ell: usize,
    pub theory: Option<AsymptoticReport>,
    pub warnings: Vec<String>,
}

impl Experiment {
    pub fn f_0(&self) -> f64 {
        self.signal.f_star() / self.ell as f64
    }

    /// The observations of replicate `r`.
    pub fn replicate_data(&self, r: usize) -> cumlomb_core::Result<TimeSeries> {
        let seed = replicate_seed(self.base_seed, r);
        let times = sample_instants(&self.scheme, self.n, seed);
        observe(&self.signal, &times, self.sigma, splitmix64(seed))
    }

    fn run_replicate(&self, r: usize) -> ReplicateOutcome {
        match self.replicate_data(r) {
            Ok(data) => ReplicateOutcome {
                checksum: checksum(&data),
                estimates: self
                    .methods
                    .iter()
                    .map(|m| estimate(&data, &self.grid, m.method, m.k, self.refine).map(|e| e.f_hat).map_err(|e| e.to_string()))
                    .collect(),
            },
            Err(e) => ReplicateOutcome {
                checksum: 0,
                estimates: vec![Err(e.to_string()); self.methods.len()],
            },
        }
    }
}

/// FNV-1a over the bit patterns of the times and values.
pub fn checksum(data: &TimeSeries) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in data.times().iter().chain(data.values()) {
        for b in x.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateOutcome {
    /// Checksum of the data every method of this replicate saw.
    pub checksum: u64,
    /// One entry per configured method, in order.
    pub estimates: Vec<std::result::Result<f64, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodStats {
    pub method: Method,
    #[serde(rename = "K")]
    pub k: usize,
    /// `mean(f_hat) - f_0` over successful replicates.
    pub bias: f64,
    pub sd: f64,
    pub rmse: f64,
    pub successes: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_replicate: Option<Vec<Option<f64>>>,
}

impl MethodStats {
    /// Two-pass statistics; NaN when nothing succeeded.
    pub fn from_estimates(method: Method, k: usize, f_0: f64, estimates: &[Option<f64>], keep: bool) -> Self {
        let ok: Vec<f64> = estimates.iter().flatten().copied().collect();
        let (bias, sd, rmse) = match mean_sd(&ok) {
            Some((mean, sd)) => {
                let mse = ok.iter().map(|f| (f - f_0) * (f - f_0)).sum::<f64>() / ok.len() as f64;
                (mean - f_0, sd, mse.sqrt())
            }
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        MethodStats {
            method,
            k,
            bias,
            sd,
            rmse,
            successes: ok.len(),
            failures: estimates.len() - ok.len(),
            per_replicate: keep.then(|| estimates.to_vec()),
        }
    }

    pub fn label(&self) -> String {
        self.method.label(self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub n: usize,
    pub sigma: f64,
    pub snr_db: Option<f64>,
    pub f_0: f64,
    pub ell: usize,
    pub stats: Vec<MethodStats>,
    pub theory: Option<AsymptoticReport>,
    pub optimal_sd: Option<f64>,
    pub predicted_clsp_sd: Option<f64>,
    /// Per-replicate data checksums, shared by all methods.
    pub checksums: Vec<u64>,
    /// First failure message per method, if any.
    pub first_errors: Vec<Option<String>>,
    pub warnings: Vec<String>,
}

/// Runs all replicates on the rayon pool and aggregates per method.
pub fn run_experiment(exp: &Experiment) -> ExperimentOutcome {
    let outcomes: Vec<ReplicateOutcome> = (0..exp.replicates).into_par_iter().map(|r| exp.run_replicate(r)).collect();
    aggregate(exp, &outcomes)
}

/// Serial counterpart of [`run_experiment`] over an arbitrary set of
/// replicate indices; used to check seed isolation.
pub fn run_replicates(exp: &Experiment, indices: impl IntoIterator<Item = usize>) -> Vec<ReplicateOutcome> {
    indices.into_iter().map(|r| exp.run_replicate(r)).collect()
}

pub fn aggregate(exp: &Experiment, outcomes: &[ReplicateOutcome]) -> ExperimentOutcome {
    let f_0 = exp.f_0();
    let mut stats = Vec::with_capacity(exp.methods.len());
    let mut first_errors = Vec::with_capacity(exp.methods.len());
    for (j, m) in exp.methods.iter().enumerate() {
        let estimates: Vec<Option<f64>> = outcomes.iter().map(|o| o.estimates[j].as_ref().ok().copied()).collect();
        stats.push(MethodStats::from_estimates(m.method, m.k, f_0, &estimates, exp.keep_replicates));
        first_errors.push(outcomes.iter().find_map(|o| o.estimates[j].as_ref().err().cloned()));
    }
    ExperimentOutcome {
        n: exp.n,
        sigma: exp.sigma,
        snr_db: exp.snr_db,
        f_0,
        ell: exp.ell,
        stats,
        optimal_sd: exp.theory.as_ref().map(|t| t.optimal_sd(exp.n)),
        predicted_clsp_sd: exp.theory.as_ref().map(|t| t.predicted_clsp_sd(exp.n, exp.ell)),
        theory: exp.theory.clone(),
        checksums: outcomes.iter().map(|o| o.checksum).collect(),
        first_errors,
        warnings: exp.warnings.clone(),
    }
}

/// `(X_j mod period, Y_j)` sorted by phase; equal phases keep time order.
///
/// # Panics
/// If `period` is not positive and finite.
pub fn phase_fold(data: &TimeSeries, period: f64) -> Vec<(f64, f64)> {
    assert!(period.is_finite() && period > 0.0, "period must be positive");
    let mut folded: Vec<(f64, f64)> = data
        .times()
        .iter()
        .zip(data.values())
        .map(|(t, y)| (t.rem_euclid(period), *y))
        .collect();
    folded.sort_by(|a, b| a.0.total_cmp(&b.0));
    folded
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub csv: String,
    pub text: String,
}

const CSV_HEADER: [&str; 11] = [
    "method", "K", "n", "sigma", "snr_db", "optimal_sd", "bias", "sd", "rmse", "successes", "failures",
];

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// One block of the results table: a row per `(method, K)` below a header
/// giving the optimal SD for this `(n, SNR)` pair.
///
/// # Panics
/// If `stats` is empty.
pub fn report_table(stats: &[MethodStats], theory: Option<&AsymptoticReport>, n: usize, snr_db: Option<f64>) -> ReportTable {
    assert!(!stats.is_empty(), "no statistics to report");
    let optimal = theory.map(|t| t.optimal_sd(n));
    let sigma = theory.map(|t| t.sigma);

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).unwrap();
    let opt = |x: Option<f64>| x.map(sci).unwrap_or_default();
    for s in stats {
        w.write_record([
            s.method.as_str().to_string(),
            s.k.to_string(),
            n.to_string(),
            opt(sigma),
            opt(snr_db),
            opt(optimal),
            sci(s.bias),
            sci(s.sd),
            sci(s.rmse),
            s.successes.to_string(),
            s.failures.to_string(),
        ])
        .unwrap();
    }
    let csv = String::from_utf8(w.into_inner().unwrap()).unwrap();

    let mut text = String::new();
    let mut block = format!("n = {n}");
    if let Some(db) = snr_db {
        write!(block, ", SNR = {db} dB").unwrap();
    }
    if let Some(s) = sigma {
        write!(block, ", sigma = {s:.4}").unwrap();
    }
    writeln!(text, "{block}").unwrap();
    match optimal {
        Some(o) => writeln!(text, "Optimal SD  {o:.3e}").unwrap(),
        None => writeln!(text, "Optimal SD  n/a").unwrap(),
    }
    writeln!(text, "{:<8}{:>12}{:>12}{:>10}", "Method", "Bias", "SD", "Failures").unwrap();
    for s in stats {
        writeln!(text, "{:<8}{:>12.3e}{:>12.3e}{:>10}", s.label(), s.bias, s.sd, s.failures).unwrap();
    }
    ReportTable { csv, text }
}

/// Reads back the rows written by [`report_table`].
pub fn parse_report_csv(text: &str) -> Result<Vec<MethodStats>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(Error::data)?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::data(format!("unexpected report header {:?}", headers.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let r = record.map_err(Error::data)?;
        let num = |i: usize| r[i].parse::<f64>().map_err(|_| Error::data(format!("bad number {:?} in column {}", &r[i], CSV_HEADER[i])));
        let count = |i: usize| r[i].parse::<usize>().map_err(|_| Error::data(format!("bad count {:?} in column {}", &r[i], CSV_HEADER[i])));
        out.push(MethodStats {
            method: r[0].parse().map_err(Error::data)?,
            k: count(1)?,
            bias: num(6)?,
            sd: num(7)?,
            rmse: num(8)?,
            successes: count(9)?,
            failures: count(10)?,
            per_replicate: None,
        });
    }
    Ok(out)
}
