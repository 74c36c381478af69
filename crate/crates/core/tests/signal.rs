mod common;

use common::*;
use cumlomb_core::{fit_trig_poly, sample_instants, Complex64, Error, PeriodicSignal};
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

/// Term-by-term trigonometric sum with compensated accumulation.
fn eval_oracle(s: &PeriodicSignal, t: f64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in -(s.degree() as i64)..=s.degree() as i64 {
        let c = s.coeff(k);
        let w = 2.0 * PI * k as f64 * s.f_star() * t;
        let term = c.re * w.cos() - c.im * w.sin();
        let y = term - comp;
        let tmp = sum + y;
        comp = (tmp - sum) - y;
        sum = tmp;
    }
    sum
}

#[test]
fn eval_matches_trig_sum() {
    let mut r = rng(1);
    for _ in 0..20 {
        let f = r.random_range(0.1..3.0);
        let s = random_signal(&mut r, f, 4);
        let scale: f64 = s.coeffs().iter().map(|c| c.norm()).sum();
        assert!((s.eval(0.37) - eval_oracle(&s, 0.37)).abs() <= 1e-12 * scale);
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let mut r = rng(2);
    let s = random_signal(&mut r, 0.7, 3);
    let d = s.derivative();
    assert_eq!(d.degree(), 3);
    assert_eq!(d.coeff(0), Complex64::new(0.0, 0.0));
    let h = 1e-5;
    let scale: f64 = d.coeffs().iter().map(|c| c.norm()).sum();
    for _ in 0..20 {
        let t = r.random_range(0.0..10.0);
        let fd = (s.eval(t + h) - s.eval(t - h)) / (2.0 * h);
        assert!((d.eval(t) - fd).abs() <= 1e-6 * scale, "t = {t}");
    }
}

#[test]
fn product_is_pointwise_multiplication() {
    let mut r = rng(3);
    let a = random_signal(&mut r, 0.4, 2);
    let b = random_signal(&mut r, 0.4, 2);
    let p = a.product(&b).unwrap();
    assert_eq!(p.degree(), 4);
    for _ in 0..20 {
        let t = r.random_range(0.0..20.0);
        assert!((p.eval(t) - a.eval(t) * b.eval(t)).abs() <= 1e-10);
    }
}

#[test]
fn l2_norm_matches_quadrature() {
    let mut r = rng(4);
    let s = random_signal(&mut r, 1.3, 5);
    let q = integrate(&|t| s.eval(t).powi(2), 0.0, 1.0 / 1.3, 1e-13);
    assert!(rel_err(s.l2_norm_sq(), q) <= 1e-8);
}

#[test]
fn fit_recovers_degree_three_signal() {
    let mut r = rng(5);
    let s = random_signal(&mut r, 0.25, 3);
    let times = sample_instants(&exponential(5.0), 50, 11);
    let values: Vec<f64> = times.iter().map(|&t| s.eval(t)).collect();
    let fit = fit_trig_poly(&times, &values, 0.25, 3).unwrap();
    for k in -3..=3 {
        assert!((fit.coeff(k) - s.coeff(k)).norm() <= 1e-8, "k = {k}");
    }
}

#[test]
fn overparameterized_fit_leaves_extra_harmonics_empty() {
    let mut r = rng(6);
    let s = random_signal(&mut r, 0.25, 2);
    let times = sample_instants(&exponential(5.0), 80, 12);
    let values: Vec<f64> = times.iter().map(|&t| s.eval(t)).collect();
    let fit = fit_trig_poly(&times, &values, 0.25, 4).unwrap();
    assert!(fit.coeff(3).norm() <= 1e-8);
    assert!(fit.coeff(4).norm() <= 1e-8);
}

#[test]
fn fit_is_locally_optimal() {
    let mut r = rng(7);
    let times = sample_instants(&exponential(5.0), 60, 13);
    let values: Vec<f64> = times.iter().map(|_| r.random_range(-1.0..1.0)).collect();
    let fit = fit_trig_poly(&times, &values, 0.31, 3).unwrap();
    let rss = |s: &PeriodicSignal| times.iter().zip(&values).map(|(&t, &y)| (y - s.eval(t)).powi(2)).sum::<f64>();
    let best = rss(&fit);
    for _ in 0..30 {
        let mut c = fit.coeffs().to_vec();
        let k = r.random_range(0..c.len());
        c[k] += if k == 0 {
            Complex64::new(1e-3, 0.0)
        } else {
            Complex64::from_polar(1e-3, r.random_range(0.0..2.0 * PI))
        };
        let perturbed = PeriodicSignal::new(0.31, c).unwrap();
        assert!(best <= rss(&perturbed));
    }
}

#[test]
fn degenerate_design_names_a_harmonic() {
    let times: Vec<f64> = (1..=40).map(|j| j as f64 * 0.5).collect();
    let values: Vec<f64> = times.iter().map(|t| t.sin()).collect();
    // at f = 1 the second harmonic aliases onto the constant on a half-step grid
    match fit_trig_poly(&times, &values, 1.0, 2) {
        Err(Error::DegenerateDesign { harmonic, condition }) => {
            assert!((1..=2).contains(&harmonic));
            assert!(condition > 1e10);
        }
        other => panic!("expected degenerate design, got {other:?}"),
    }
}

fn arb_signal(max_degree: usize) -> impl Strategy<Value = PeriodicSignal> {
    (0.05f64..5.0, prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=max_degree + 1)).prop_map(|(f, cs)| {
        let coeffs = cs
            .iter()
            .enumerate()
            .map(|(k, &(re, im))| Complex64::new(re, if k == 0 { 0.0 } else { im }))
            .collect();
        PeriodicSignal::new(f, coeffs).unwrap()
    })
}

proptest! {
    #[test]
    fn hermitian_symmetry(s in arb_signal(6), k in 0i64..8) {
        prop_assert_eq!(s.coeff(-k), s.coeff(k).conj());
        prop_assert_eq!(s.coeff(0).im, 0.0);
    }

    #[test]
    fn periodicity(s in arb_signal(6), t in -50.0f64..50.0) {
        let a = s.eval(t);
        let b = s.eval(t + 1.0 / s.f_star());
        let scale: f64 = s.coeffs().iter().map(|c| c.norm()).sum();
        prop_assert!((a - b).abs() <= 1e-12 * scale.max(a.abs()) * (1.0 + t.abs() * s.f_star()));
    }

    #[test]
    fn parseval(s in arb_signal(6)) {
        let direct: f64 = (-(s.degree() as i64)..=s.degree() as i64).map(|k| s.coeff(k).norm_sqr()).sum();
        prop_assert!((s.l2_norm_sq() * s.f_star() - direct).abs() <= 1e-12 * direct.max(1e-300));
    }

    #[test]
    fn product_rule(s in arb_signal(5)) {
        let ds = s.derivative();
        let lhs_a = ds.product(&s).unwrap();
        let lhs_b = s.product(&ds).unwrap();
        let rhs = s.product(&s).unwrap().derivative();
        let scale = 1.0 + rhs.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for k in -(rhs.degree() as i64)..=rhs.degree() as i64 {
            prop_assert!((lhs_a.coeff(k) + lhs_b.coeff(k) - rhs.coeff(k)).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn fit_is_scale_equivariant(seed in 0u64..1000, alpha in -10.0f64..10.0) {
        let mut r = rng(seed);
        let times = sample_instants(&exponential(5.0), 40, seed);
        let values: Vec<f64> = times.iter().map(|_| r.random_range(-1.0..1.0)).collect();
        let scaled: Vec<f64> = values.iter().map(|v| alpha * v).collect();
        let a = fit_trig_poly(&times, &values, 0.3, 2).unwrap();
        let b = fit_trig_poly(&times, &scaled, 0.3, 2).unwrap();
        for k in 0..=2i64 {
            prop_assert!((b.coeff(k) - a.coeff(k) * alpha).norm() <= 1e-10 * (1.0 + alpha.abs()));
        }
    }
}
