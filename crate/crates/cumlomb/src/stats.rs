//! Summary statistics and the Anderson-Darling normality test.

use std::f64::consts::SQRT_2;

/// Mean and sample standard deviation (`n - 1` denominator, zero for a
/// single value), computed in two passes. `None` for an empty slice.
pub fn mean_sd(x: &[f64]) -> Option<(f64, f64)> {
    if x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() == 1 {
        return Some((mean, 0.0));
    }
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    Some((mean, (ss / (n - 1.0)).sqrt()))
}

pub fn median(x: &[f64]) -> Option<f64> {
    if x.is_empty() {
        return None;
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndersonDarling {
    /// Raw statistic `A^2`.
    pub a2: f64,
    /// Small-sample corrected `A^2 (1 + 0.75/n + 2.25/n^2)`.
    pub a2_star: f64,
    /// Approximate upper-tail probability of `a2_star`.
    pub p_value: f64,
}

impl AndersonDarling {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value > level
    }
}

/// Composite test of normality with mean and variance estimated from the
/// sample. P-values follow the D'Agostino-Stephens piecewise approximation
/// (the 1% critical value of `a2_star` is about 1.035).
///
/// # Panics
/// With fewer than 8 values or a zero-spread sample.
pub fn anderson_darling_normal(x: &[f64]) -> AndersonDarling {
    assert!(x.len() >= 8, "Anderson-Darling needs at least 8 values");
    let (mean, sd) = mean_sd(x).unwrap();
    assert!(sd > 0.0, "sample has no spread");

    let mut z: Vec<f64> = x.iter().map(|v| (v - mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let n = z.len();
    let nf = n as f64;
    // ln Phi(z) and ln(1 - Phi(z)) via erfc keep both tails accurate.
    let log_cdf = |z: f64| (0.5 * libm::erfc(-z / SQRT_2)).ln();
    let log_sf = |z: f64| (0.5 * libm::erfc(z / SQRT_2)).ln();
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (log_cdf(z[i]) + log_sf(z[n - 1 - i])))
        .sum();
    let a2 = -nf - s / nf;
    let a2_star = a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf));
    let a = a2_star;
    let p_value = if a >= 0.6 {
        (1.2937 - 5.709 * a + 0.0186 * a * a).exp()
    } else if a >= 0.34 {
        (0.9177 - 4.279 * a - 1.38 * a * a).exp()
    } else if a >= 0.2 {
        1.0 - (-8.318 + 42.796 * a - 59.938 * a * a).exp()
    } else {
        1.0 - (-13.436 + 101.14 * a - 223.73 * a * a).exp()
    };
    AndersonDarling { a2, a2_star, p_value: p_value.clamp(0.0, 1.0) }
}
