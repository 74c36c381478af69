//! File formats: light curves and periodograms as CSV, signals as JSON.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use cumlomb_core::{Complex64, FrequencyGrid, PeriodicSignal, RenewalScheme, TimeSeries};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt};

/// Reads `t,y` rows. A leading `t,y` header is optional; `#` starts a
/// comment line. Times must be positive and strictly increasing.
pub fn read_series<R: Read>(reader: R) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::data(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() != 2 {
            return Err(Error::data(format!("line {line}: expected 2 fields, found {}", record.len())));
        }
        if i == 0 && &record[0] == "t" && &record[1] == "y" {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::data(format!("line {line}: {s:?} is not a number")))
        };
        times.push(parse(&record[0])?);
        values.push(parse(&record[1])?);
    }
    TimeSeries::new(times, values).or_data("light curve")
}

pub fn read_series_file(path: &Path) -> Result<TimeSeries> {
    let file = std::fs::File::open(path).map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    read_series(file)
}

/// Writes the `t,y` header and one row per observation. Values are printed
/// in shortest round-trip form, so reading them back is lossless.
pub fn write_series<W: Write>(writer: W, data: &TimeSeries) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "y"])?;
    for (t, y) in data.times().iter().zip(data.values()) {
        w.write_record([t.to_string(), y.to_string()])?;
    }
    w.flush()
}

/// `f,lambda` rows with 17 significant digits.
pub fn write_periodogram<W: Write>(writer: W, grid: &FrequencyGrid, values: &[f64]) -> std::io::Result<()> {
    assert_eq!(grid.len(), values.len(), "one value per grid point");
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["f", "lambda"])?;
    for (f, v) in grid.iter().zip(values) {
        w.write_record([format!("{f:.16e}"), format!("{v:.16e}")])?;
    }
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffDoc {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

/// JSON form of a [`PeriodicSignal`]: only `k >= 0` is listed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalDoc {
    pub f_star: f64,
    pub coeffs: Vec<CoeffDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl SignalDoc {
    pub fn from_signal(signal: &PeriodicSignal) -> Self {
        let coeffs = signal
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| CoeffDoc { k: k as i64, re: c.re, im: c.im })
            .collect();
        SignalDoc { f_star: signal.f_star(), coeffs, description: None }
    }

    /// Harmonics missing from the list are zero; negative or repeated
    /// indices are rejected.
    pub fn to_signal(&self) -> Result<PeriodicSignal> {
        let mut by_k = BTreeMap::new();
        for c in &self.coeffs {
            if c.k < 0 {
                return Err(Error::data(format!("coefficient index {} is negative; only k >= 0 is stored", c.k)));
            }
            if by_k.insert(c.k as usize, Complex64::new(c.re, c.im)).is_some() {
                return Err(Error::data(format!("coefficient index {} appears twice", c.k)));
            }
        }
        let degree = by_k.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (k, c) in by_k {
            coeffs[k] = c;
        }
        PeriodicSignal::new(self.f_star, coeffs).or_data("signal")
    }
}

pub fn signal_to_json(signal: &PeriodicSignal) -> String {
    serde_json::to_string_pretty(&SignalDoc::from_signal(signal)).expect("signal serializes")
}

pub fn signal_from_json(text: &str) -> Result<PeriodicSignal> {
    let doc: SignalDoc = serde_json::from_str(text).map_err(|e| Error::data(format!("signal JSON: {e}")))?;
    doc.to_signal()
}

pub fn read_signal_file(path: &Path) -> Result<PeriodicSignal> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    signal_from_json(&text)
}

/// Parses a sampling scheme written as `exponential:RATE`,
/// `gamma:SHAPE,RATE`, `uniform:LOW,HIGH`, or as the JSON object used in
/// experiment configs.
pub fn parse_scheme(spec: &str) -> Result<RenewalScheme> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let scheme: RenewalScheme = serde_json::from_str(spec).map_err(|e| Error::config(format!("scheme: {e}")))?;
        return scheme.validated().map_err(Error::config);
    }
    let (law, params) = spec.split_once(':').unwrap_or((spec, ""));
    let params: Vec<f64> = params
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| Error::config(format!("scheme parameter {p:?} is not a number"))))
        .collect::<Result<_>>()?;
    let scheme = match (law.to_ascii_lowercase().as_str(), params.as_slice()) {
        ("exponential" | "exp" | "poisson", [rate]) => RenewalScheme::exponential(*rate),
        ("gamma", [shape, rate]) => RenewalScheme::gamma(*shape, *rate),
        ("uniform", [low, high]) => RenewalScheme::uniform(*low, *high),
        _ => {
            return Err(Error::config(format!(
                "unrecognized scheme {spec:?}; expected exponential:RATE, gamma:SHAPE,RATE or uniform:LOW,HIGH"
            )))
        }
    };
    scheme.map_err(Error::config)
}
