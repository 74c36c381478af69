mod common;

use common::*;
use cumlomb_core::sampling::char_fn;
use cumlomb_core::{observe, sample_instants, Complex64, PeriodicSignal, RenewalScheme};

#[test]
fn gamma_char_fn_matches_quadrature() {
    let scheme = RenewalScheme::gamma(2.0, 3.0).unwrap();
    let density = |v: f64| 9.0 * v * (-3.0 * v).exp();
    let t = 1.0;
    let re = integrate(&|v| (t * v).cos() * density(v), 0.0, 40.0, 1e-13);
    let im = integrate(&|v| (t * v).sin() * density(v), 0.0, 40.0, 1e-13);
    let phi = char_fn(&scheme, t);
    assert!((phi - Complex64::new(re, im)).norm() <= 1e-8);
}

#[test]
fn uniform_char_fn_matches_quadrature() {
    let scheme = RenewalScheme::uniform(0.1, 0.5).unwrap();
    for &t in &[0.7, 9.0, 40.0] {
        let re = integrate(&|v| (t * v).cos() / 0.4, 0.1, 0.5, 1e-13);
        let im = integrate(&|v| (t * v).sin() / 0.4, 0.1, 0.5, 1e-13);
        assert!((scheme.char_fn(t) - Complex64::new(re, im)).norm() <= 1e-9);
    }
}

#[test]
fn law_of_large_numbers() {
    let x = sample_instants(&exponential(5.0), 10_000, 2024);
    assert!((x[x.len() - 1] / 10_000.0 - 0.2).abs() <= 0.01);
    assert!(x.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn gaussian_noise_moments() {
    let zero = PeriodicSignal::constant(0.25, 0.0).unwrap();
    let x = sample_instants(&exponential(5.0), 10_000, 3);
    let ts = observe(&zero, &x, 1.0, 4).unwrap();
    let n = ts.len() as f64;
    let mean = ts.values().iter().sum::<f64>() / n;
    let var = ts.values().iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() <= 0.03);
    assert!((var - 1.0).abs() <= 0.05);
}

#[test]
fn observations_are_reproducible() {
    let s = PeriodicSignal::sinusoid(0.25, 1.0, 0.0).unwrap();
    let x = sample_instants(&exponential(5.0), 200, 5);
    assert_eq!(observe(&s, &x, 0.3, 6).unwrap(), observe(&s, &x, 0.3, 6).unwrap());
}

#[test]
fn poisson_weight_is_one() {
    let scheme = exponential(5.0);
    for i in 1..200 {
        let t = 0.05 * i as f64 * if i % 2 == 0 { 1.0 } else { -1.0 };
        assert!((scheme.harmonic_weight(t) - 1.0).abs() <= 1e-12, "t = {t}");
    }
}

#[test]
fn char_fn_slope_at_zero_is_i_mu() {
    let h = 1e-6;
    for scheme in [exponential(5.0), RenewalScheme::gamma(2.0, 3.0).unwrap(), RenewalScheme::uniform(0.1, 0.5).unwrap()] {
        let d = (scheme.char_fn(h) - scheme.char_fn(-h)) / (2.0 * h);
        assert!((d - Complex64::new(0.0, scheme.mean())).norm() <= 1e-6, "{scheme:?}");
    }
}

/// One-sample Kolmogorov-Smirnov statistic.
fn ks_statistic(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn inter_arrivals_follow_their_law() {
    let n = 5000;
    let critical = 1.628 / (n as f64).sqrt(); // level 0.01
    let cases: Vec<(RenewalScheme, Box<dyn Fn(f64) -> f64>)> = vec![
        (exponential(5.0), Box::new(|x: f64| 1.0 - (-5.0 * x).exp())),
        (RenewalScheme::gamma(2.0, 3.0).unwrap(), Box::new(|x: f64| 1.0 - (-3.0 * x).exp() * (1.0 + 3.0 * x))),
        (RenewalScheme::uniform(0.1, 0.5).unwrap(), Box::new(|x: f64| ((x - 0.1) / 0.4).clamp(0.0, 1.0))),
    ];
    for (scheme, cdf) in cases {
        for seed in [11u64, 12, 13] {
            let x = sample_instants(&scheme, n, seed);
            let mut gaps = vec![x[0]];
            gaps.extend(x.windows(2).map(|w| w[1] - w[0]));
            let d = ks_statistic(gaps, &cdf);
            assert!(d < critical, "{scheme:?} seed {seed}: D = {d}");
        }
    }
}
