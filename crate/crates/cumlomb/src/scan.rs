//! Grid scans spread over the rayon pool.
//!
//! Every grid point is evaluated independently and collected in grid order,
//! so the output is bitwise identical to the serial scan for any thread count.

use cumlomb_core::estimator::{check_method, evaluate};
use cumlomb_core::{clsp, estimate_from_scan, EstimateResult, FrequencyGrid, Method, TimeSeries};
use rayon::prelude::*;

pub fn par_scan(data: &TimeSeries, grid: &FrequencyGrid, method: Method, k: usize) -> Vec<cumlomb_core::Result<f64>> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| evaluate(data, grid.get(i), method, k))
        .collect()
}

pub fn par_clsp_grid(data: &TimeSeries, grid: &FrequencyGrid, k: usize) -> Vec<f64> {
    (0..grid.len()).into_par_iter().map(|i| clsp(data, grid.get(i), k)).collect()
}

/// Same result as [`cumlomb_core::estimate`], with the scan in parallel.
pub fn par_estimate(
    data: &TimeSeries,
    grid: &FrequencyGrid,
    method: Method,
    k: usize,
    refine: bool,
) -> cumlomb_core::Result<EstimateResult> {
    let grid = grid.validated()?;
    check_method(method, k, data.len())?;
    let values = par_scan(data, &grid, method, k);
    estimate_from_scan(data, &grid, method, k, refine, &values)
}
