//! Grid search for the frequency maximizing the cumulated periodogram or
//! minimizing the harmonic least-squares residual.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::periodogram::{clsp, ls_criterion};
use crate::sampling::TimeSeries;

/// Regular grid `f_min + i * mesh`, `i = 0..len`, never above `f_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequencyGrid {
    f_min: f64,
    f_max: f64,
    mesh: f64,
}

impl FrequencyGrid {
    pub fn new(f_min: f64, f_max: f64, mesh: f64) -> Result<Self> {
        FrequencyGrid { f_min, f_max, mesh }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let FrequencyGrid { f_min, f_max, mesh } = self;
        if !(f_min.is_finite() && f_max.is_finite() && mesh.is_finite()) {
            return Err(Error::InvalidInput("grid bounds and mesh must be finite".into()));
        }
        if !(f_min > 0.0) {
            return Err(Error::InvalidInput(format!("f_min must be positive, got {f_min}")));
        }
        if !(mesh > 0.0) {
            return Err(Error::InvalidInput(format!("mesh must be positive, got {mesh}")));
        }
        if !(f_max > f_min) {
            return Err(Error::EmptyGrid);
        }
        Ok(self)
    }

    pub fn f_min(&self) -> f64 {
        self.f_min
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn len(&self) -> usize {
        // The relative slack keeps (0.52 - 0.2) / 5e-5 at 6400 intervals
        // despite rounding; `get` clamps the last point to f_max.
        let steps = (self.f_max - self.f_min) / self.mesh;
        (steps * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> f64 {
        (self.f_min + i as f64 * self.mesh).min(self.f_max)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Method {
    /// Maximize the cumulated periodogram.
    Clsp,
    /// Minimize the harmonic least-squares residual.
    Ls,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Clsp => "clsp",
            Method::Ls => "ls",
        }
    }

    /// Short row label (`CP4`, `LS2`, ...).
    pub fn label(&self, k: usize) -> alloc::string::String {
        match self {
            Method::Clsp => format!("CP{k}"),
            Method::Ls => format!("LS{k}"),
        }
    }

    /// Criterion oriented so that larger is better.
    fn score(&self, value: f64) -> f64 {
        match self {
            Method::Clsp => value,
            Method::Ls => -value,
        }
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clsp" | "cp" => Ok(Method::Clsp),
            "ls" => Ok(Method::Ls),
            other => Err(Error::InvalidInput(format!("unknown method {other:?} (expected clsp or ls)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateResult {
    pub f_hat: f64,
    /// Periodogram (CLSP) or residual sum of squares (LS) at `f_hat`.
    pub criterion_value: f64,
    pub method: Method,
    #[cfg_attr(feature = "serde", serde(rename = "K"))]
    pub k: usize,
    pub refined: bool,
    pub grid_index: usize,
    /// Grid frequencies where the criterion could not be evaluated.
    #[cfg_attr(feature = "serde", serde(default))]
    pub skipped: Vec<f64>,
}

/// One criterion evaluation.
pub fn evaluate(data: &TimeSeries, f: f64, method: Method, k: usize) -> Result<f64> {
    match method {
        Method::Clsp => Ok(clsp(data, f, k)),
        Method::Ls => ls_criterion(data, f, k),
    }
}

/// Checks that `(method, k)` can run on `n` observations.
pub fn check_method(method: Method, k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("harmonic count K must be at least 1".into()));
    }
    if method == Method::Ls && n < 2 * k + 1 {
        return Err(Error::InvalidInput(format!(
            "least squares with K = {k} needs at least {} observations, got {n}",
            2 * k + 1
        )));
    }
    Ok(())
}

/// Serial evaluation of the criterion over the whole grid.
pub fn scan(data: &TimeSeries, grid: &FrequencyGrid, method: Method, k: usize) -> Vec<Result<f64>> {
    grid.iter().map(|f| evaluate(data, f, method, k)).collect()
}

/// Reduces a precomputed scan to an estimate.
///
/// The winner is the best grid value, ties going to the lowest frequency.
/// Points whose evaluation failed are skipped and listed in the result; if
/// every point failed the first error is returned. With `refine`, a parabola
/// through the winner and its two neighbours may move the estimate to its
/// vertex, provided the parabola opens the right way, the vertex lies within
/// one mesh of the winner and the criterion there is no worse.
pub fn estimate_from_scan(
    data: &TimeSeries,
    grid: &FrequencyGrid,
    method: Method,
    k: usize,
    refine: bool,
    scan: &[Result<f64>],
) -> Result<EstimateResult> {
    let grid = grid.validated()?;
    check_method(method, k, data.len())?;
    if scan.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "scan has {} values for a grid of {} points",
            scan.len(),
            grid.len()
        )));
    }

    let mut best: Option<(usize, f64)> = None;
    let mut skipped = Vec::new();
    let mut first_err = None;
    for (i, value) in scan.iter().enumerate() {
        match value {
            Ok(v) if v.is_finite() => {
                let s = method.score(*v);
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((i, s));
                }
            }
            Ok(v) => {
                skipped.push(grid.get(i));
                first_err.get_or_insert_with(|| Error::Consistency(format!("non-finite criterion {v} at f = {}", grid.get(i))));
            }
            Err(e) => {
                skipped.push(grid.get(i));
                first_err.get_or_insert_with(|| e.clone());
            }
        }
    }
    let Some((index, score)) = best else {
        return Err(first_err.unwrap_or(Error::EmptyGrid));
    };

    let mut result = EstimateResult {
        f_hat: grid.get(index),
        criterion_value: method.score(score),
        method,
        k,
        refined: false,
        grid_index: index,
        skipped,
    };
    if refine {
        refine_parabolic(data, &grid, scan, &mut result);
    }
    Ok(result)
}

fn refine_parabolic(data: &TimeSeries, grid: &FrequencyGrid, scan: &[Result<f64>], result: &mut EstimateResult) {
    let i = result.grid_index;
    if i == 0 || i + 1 >= grid.len() {
        return;
    }
    let (Ok(lo), Ok(hi)) = (&scan[i - 1], &scan[i + 1]) else {
        return;
    };
    let method = result.method;
    let (y_lo, y0, y_hi) = (method.score(*lo), method.score(result.criterion_value), method.score(*hi));
    let curvature = y_lo - 2.0 * y0 + y_hi;
    if !(curvature < 0.0) {
        return;
    }
    let offset = 0.5 * (y_lo - y_hi) / curvature;
    if !(offset.abs() <= 1.0) {
        return;
    }
    let f_vertex = grid.get(i) + offset * grid.mesh();
    if let Ok(v) = evaluate(data, f_vertex, method, result.k) {
        if method.score(v) >= y0 {
            result.f_hat = f_vertex;
            result.criterion_value = v;
            result.refined = true;
        }
    }
}

pub fn estimate(data: &TimeSeries, grid: &FrequencyGrid, method: Method, k: usize, refine: bool) -> Result<EstimateResult> {
    let grid = grid.validated()?;
    check_method(method, k, data.len())?;
    let values = scan(data, &grid, method, k);
    estimate_from_scan(data, &grid, method, k, refine, &values)
}

/// Frequency maximizing the cumulated periodogram over `grid`.
pub fn estimate_clsp(data: &TimeSeries, grid: &FrequencyGrid, k: usize, refine: bool) -> Result<EstimateResult> {
    estimate(data, grid, Method::Clsp, k, refine)
}

/// Frequency minimizing the least-squares residual over `grid`.
pub fn estimate_ls(data: &TimeSeries, grid: &FrequencyGrid, k: usize, refine: bool) -> Result<EstimateResult> {
    estimate(data, grid, Method::Ls, k, refine)
}
