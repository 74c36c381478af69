//! Real periodic signals represented by a finite set of Fourier coefficients.
//!
//! A signal of degree `d` is `s(t) = sum_{|k| <= d} c_k exp(2 pi i k f_star t)`.
//! Only the coefficients with `k >= 0` are stored; `c_{-k}` is always read as
//! `conj(c_k)`, so the represented function is real by construction.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::PivotedQr;

/// Relative tolerance on the imaginary part of `c_0`.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Condition number of the trigonometric design above which a fit is refused.
pub const FIT_CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSignal {
    f_star: f64,
    /// `c_0, c_1, ..., c_d`.
    coeffs: Vec<Complex64>,
}

impl PeriodicSignal {
    /// Builds a signal from its non-negative-index coefficients `c_0..=c_d`.
    ///
    /// `c_0` must be real up to a relative residue of `1e-10`; the residue is
    /// dropped.
    pub fn new(f_star: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(f_star.is_finite() && f_star > 0.0) {
            return Err(Error::InvalidInput(format!("f_star must be finite and positive, got {f_star}")));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a signal needs at least the coefficient c_0".into()));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput("non-finite Fourier coefficient".into()));
        }
        let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
        if coeffs[0].im.abs() > IMAG_RESIDUE_TOL * scale {
            return Err(Error::Consistency(format!(
                "c_0 = {} has an imaginary part; the signal would not be real",
                coeffs[0]
            )));
        }
        let mut coeffs = coeffs;
        coeffs[0].im = 0.0;
        Ok(PeriodicSignal { f_star, coeffs })
    }

    pub fn constant(f_star: f64, value: f64) -> Result<Self> {
        Self::new(f_star, vec![Complex64::new(value, 0.0)])
    }

    /// `amplitude * sin(2 pi f_star t + phase)`.
    pub fn sinusoid(f_star: f64, amplitude: f64, phase: f64) -> Result<Self> {
        // sin(x + p) = (e^{i(x+p)} - e^{-i(x+p)}) / 2i  =>  c_1 = -i A e^{ip} / 2
        let c1 = Complex64::new(0.0, -0.5 * amplitude) * Complex64::from_polar(1.0, phase);
        Self::new(f_star, vec![Complex64::new(0.0, 0.0), c1])
    }

    /// Builds a signal from a real trigonometric expansion
    /// `a_0 + sum_k (a_k cos(2 pi k f t) + b_k sin(2 pi k f t))`.
    /// `cos[0]` is `a_0`; `sin[0]` is ignored.
    pub fn from_trig(f_star: f64, cos: &[f64], sin: &[f64]) -> Result<Self> {
        if cos.len() != sin.len() || cos.is_empty() {
            return Err(Error::InvalidInput("cos and sin coefficient arrays must have equal, non-zero length".into()));
        }
        let mut coeffs = Vec::with_capacity(cos.len());
        coeffs.push(Complex64::new(cos[0], 0.0));
        for k in 1..cos.len() {
            coeffs.push(Complex64::new(0.5 * cos[k], -0.5 * sin[k]));
        }
        Self::new(f_star, coeffs)
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn period(&self) -> f64 {
        1.0 / self.f_star
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `c_0..=c_d`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_k` for any integer `k`; zero outside `[-d, d]`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(c) if k >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let phase = cycle_fraction(self.f_star * t);
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            let (s, co) = (2.0 * PI * k as f64 * phase).sin_cos();
            acc += c.re * co - c.im * s;
        }
        self.coeffs[0].re + 2.0 * acc
    }

    /// Time derivative: `c_k -> 2 pi i k f_star c_k`.
    pub fn derivative(&self) -> Self {
        let w = 2.0 * PI * self.f_star;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::new(0.0, w * k as f64))
            .collect();
        PeriodicSignal { f_star: self.f_star, coeffs }
    }

    /// Coefficients of the pointwise product, by discrete convolution.
    pub fn product(&self, other: &PeriodicSignal) -> Result<Self> {
        if self.f_star != other.f_star {
            return Err(Error::MismatchedFrequency(self.f_star, other.f_star));
        }
        let da = self.degree() as i64;
        let db = other.degree() as i64;
        let d = da + db;
        let mut coeffs = Vec::with_capacity(d as usize + 1);
        // c_0 = a_0 b_0 + 2 sum_{j>0} Re(a_j conj(b_j)) is real exactly.
        let mut c0 = self.coeffs[0].re * other.coeffs[0].re;
        for j in 1..=da.min(db) as usize {
            c0 += 2.0 * (self.coeffs[j] * other.coeffs[j].conj()).re;
        }
        coeffs.push(Complex64::new(c0, 0.0));
        for k in 1..=d {
            let lo = (-da).max(k - db);
            let hi = da.min(k + db);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in lo..=hi {
                acc += self.coeff(j) * other.coeff(k - j);
            }
            coeffs.push(acc);
        }
        Ok(PeriodicSignal { f_star: self.f_star, coeffs })
    }

    pub fn scale(&self, alpha: f64) -> Self {
        PeriodicSignal {
            f_star: self.f_star,
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    /// Same signal with `c_0` set to zero.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::new(0.0, 0.0);
        out
    }

    /// Same coefficients attached to another fundamental frequency
    /// (a dilation in time).
    pub fn with_f_star(&self, f_star: f64) -> Result<Self> {
        Self::new(f_star, self.coeffs.clone())
    }

    /// `sum_{|k| <= d} |c_k|^2`.
    pub fn coeff_energy(&self) -> f64 {
        let tail: f64 = self.coeffs[1..].iter().map(|c| c.norm_sqr()).sum();
        self.coeffs[0].norm_sqr() + 2.0 * tail
    }

    /// Integral of `s^2` over one period, via Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeff_energy() / self.f_star
    }

    /// Mean power of the signal with its constant removed.
    pub fn ac_power(&self) -> f64 {
        2.0 * self.coeffs[1..].iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

/// Fractional part of `x` in `[0, 1)`.
pub(crate) fn cycle_fraction(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Least-squares fit of a real trigonometric polynomial of the given degree at
/// frequency `f`.
///
/// The design has columns `1, cos(2 pi k f t), sin(2 pi k f t)` for
/// `k = 1..=degree` and is solved by pivoted Householder QR. A design whose
/// condition estimate exceeds [`FIT_CONDITION_LIMIT`] is rejected with the
/// harmonic of the weakest column.
pub fn fit_trig_poly(times: &[f64], values: &[f64], f: f64, degree: usize) -> Result<PeriodicSignal> {
    let n = times.len();
    let p = 2 * degree + 1;
    if values.len() != n {
        return Err(Error::InvalidInput(format!("{} times but {} values", n, values.len())));
    }
    if n < p {
        return Err(Error::InvalidInput(format!(
            "degree {degree} needs at least {p} observations, got {n}"
        )));
    }
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::InvalidInput(format!("frequency must be positive, got {f}")));
    }
    if times.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite sample".into()));
    }

    let mut design = vec![0.0; n * p];
    for (i, &t) in times.iter().enumerate() {
        design[i] = 1.0;
        let phase = cycle_fraction(f * t);
        for k in 1..=degree {
            let (s, c) = (2.0 * PI * k as f64 * phase).sin_cos();
            design[(2 * k - 1) * n + i] = c;
            design[2 * k * n + i] = s;
        }
    }
    let qr = PivotedQr::new(n, p, design);
    let condition = qr.condition();
    if !(condition <= FIT_CONDITION_LIMIT) {
        let col = qr.weakest_column();
        return Err(Error::DegenerateDesign { harmonic: col.div_ceil(2), condition });
    }
    let x = qr.solve(values);
    let mut cos = vec![0.0; degree + 1];
    let mut sin = vec![0.0; degree + 1];
    cos[0] = x[0];
    for k in 1..=degree {
        cos[k] = x[2 * k - 1];
        sin[k] = x[2 * k];
    }
    PeriodicSignal::from_trig(f, &cos, &sin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_evaluates_to_c0() {
        let s = PeriodicSignal::constant(0.3, 3.0).unwrap();
        assert_eq!(s.eval(12.345), 3.0);
    }

    #[test]
    fn sine_at_quarter_period() {
        let s = PeriodicSignal::new(1.0, vec![c(0.0, 0.0), c(0.0, -0.5)]).unwrap();
        assert!((s.eval(0.25) - 1.0).abs() < 1e-15);
        assert_eq!(s.coeff(-1), c(0.0, 0.5));
    }

    #[test]
    fn sinusoid_helper_matches_sine() {
        let s = PeriodicSignal::sinusoid(0.25, 2.0, 0.3).unwrap();
        for &t in &[0.0, 0.7, 3.1, 17.9] {
            let want = 2.0 * (2.0 * PI * 0.25 * t + 0.3).sin();
            assert!((s.eval(t) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_sine() {
        let s = PeriodicSignal::sinusoid(1.0, 1.0, 0.0).unwrap();
        let d = s.derivative();
        assert_eq!(d.degree(), 1);
        assert_eq!(d.coeff(0), c(0.0, 0.0));
        assert!((d.coeff(1) - c(PI, 0.0)).norm() < 1e-15);
        assert!((d.coeff(-1) - c(PI, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let d = PeriodicSignal::constant(2.0, 7.0).unwrap().derivative();
        assert!(d.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn sine_times_its_derivative() {
        let s = PeriodicSignal::sinusoid(1.0, 1.0, 0.0).unwrap();
        let p = s.product(&s.derivative()).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.coeff(0).norm() < 1e-15);
        assert!(p.coeff(1).norm() < 1e-15);
        assert!((p.coeff(2) - c(0.0, -PI / 2.0)).norm() < 1e-14);
        assert!((p.coeff(-2) - c(0.0, PI / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_factor_scales() {
        let two = PeriodicSignal::constant(0.5, 2.0).unwrap();
        let b = PeriodicSignal::new(0.5, vec![c(1.0, 0.0), c(0.3, -0.2), c(-0.1, 0.4)]).unwrap();
        let p = two.product(&b).unwrap();
        for k in -2..=2 {
            assert!((p.coeff(k) - b.coeff(k) * 2.0).norm() < 1e-15);
        }
    }

    #[test]
    fn product_rejects_mismatched_frequency() {
        let a = PeriodicSignal::constant(0.5, 1.0).unwrap();
        let b = PeriodicSignal::constant(0.25, 1.0).unwrap();
        assert!(matches!(a.product(&b), Err(Error::MismatchedFrequency(..))));
    }

    #[test]
    fn norms() {
        assert_eq!(PeriodicSignal::constant(1.0, 0.0).unwrap().l2_norm_sq(), 0.0);
        let s = PeriodicSignal::sinusoid(1.0, 1.0, 0.0).unwrap();
        assert!((s.l2_norm_sq() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn imaginary_mean_is_rejected() {
        let err = PeriodicSignal::new(1.0, vec![c(1.0, 0.5)]).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
    }

    #[test]
    fn fit_constant() {
        let times: Vec<f64> = (1..=10).map(|i| i as f64 * 0.37).collect();
        let s = fit_trig_poly(&times, &[5.0; 10], 0.3, 0).unwrap();
        assert!((s.coeff(0).re - 5.0).abs() < 1e-13);
    }

    #[test]
    fn fit_rejects_regular_grid_at_resonance() {
        // integer times at f = 1: every harmonic column is constant
        let times: Vec<f64> = (1..=30).map(|i| i as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| t * 0.1).collect();
        let err = fit_trig_poly(&times, &values, 1.0, 2).unwrap_err();
        assert!(matches!(err, Error::DegenerateDesign { harmonic, .. } if harmonic >= 1));
    }

    #[test]
    fn fit_needs_enough_points() {
        assert!(matches!(
            fit_trig_poly(&[1.0, 2.0], &[0.0, 1.0], 0.3, 1),
            Err(Error::InvalidInput(_))
        ));
    }
}
