//! Test-only oracles. Nothing here calls into the code paths under test
//! beyond constructors and `eval`.
#![allow(dead_code)]

use cumlomb_core::{Complex64, PeriodicSignal, RenewalScheme, TimeSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_signal(rng: &mut ChaCha8Rng, f_star: f64, degree: usize) -> PeriodicSignal {
    let mut coeffs = vec![Complex64::new(rng.random_range(-1.0..1.0), 0.0)];
    for _ in 0..degree {
        coeffs.push(Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    }
    PeriodicSignal::new(f_star, coeffs).unwrap()
}

/// Renewal instants drawn directly from inverse-CDF exponentials.
pub fn exp_instants(rng: &mut ChaCha8Rng, n: usize, rate: f64) -> Vec<f64> {
    let mut t = 0.0;
    (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(f64::EPSILON..1.0);
            t += -u.ln() / rate;
            t
        })
        .collect()
}

pub fn random_series(rng: &mut ChaCha8Rng, n: usize) -> TimeSeries {
    let times = exp_instants(rng, n, 5.0);
    let values = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    TimeSeries::new(times, values).unwrap()
}

/// `n^-2 sum_k sum_{j,j'} Y_j Y_j' cos(2 pi k f (X_j - X_j'))`.
pub fn clsp_double_sum(ts: &TimeSeries, f: f64, k: usize) -> f64 {
    let (x, y) = (ts.times(), ts.values());
    let n = x.len();
    let mut total = 0.0;
    for h in 1..=k {
        for a in 0..n {
            for b in 0..n {
                total += y[a] * y[b] * (2.0 * PI * h as f64 * f * (x[a] - x[b])).cos();
            }
        }
    }
    total / (n * n) as f64
}

/// Residual sum of squares of the real trigonometric regression
/// `a_0 + sum_k a_k cos + b_k sin`, via Gaussian elimination on the normal
/// equations.
pub fn ls_direct(ts: &TimeSeries, f: f64, k: usize) -> f64 {
    let p = 2 * k + 1;
    let rows: Vec<Vec<f64>> = ts
        .times()
        .iter()
        .map(|&t| {
            let mut r = vec![1.0];
            for h in 1..=k {
                let w = 2.0 * PI * h as f64 * f * t;
                r.push(w.cos());
                r.push(w.sin());
            }
            r
        })
        .collect();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (r, &y) in rows.iter().zip(ts.values()) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += r[i] * r[j];
            }
            a[i][p] += r[i] * y;
        }
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for row in 0..p {
            if row != col {
                let m = a[row][col] / a[col][col];
                for c in col..=p {
                    a[row][c] -= m * a[col][c];
                }
            }
        }
    }
    let beta: Vec<f64> = (0..p).map(|i| a[i][p] / a[i][i]).collect();
    rows.iter()
        .zip(ts.values())
        .map(|(r, &y)| {
            let fit: f64 = r.iter().zip(&beta).map(|(x, b)| x * b).sum();
            (y - fit).powi(2)
        })
        .sum()
}

/// Adaptive Simpson quadrature.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 24)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn exponential(rate: f64) -> RenewalScheme {
    RenewalScheme::exponential(rate).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
