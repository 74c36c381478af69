//! Cumulated Lomb-Scargle periodogram and the harmonic least-squares system.
//!
//! With `z_j = exp(-2 pi i f X_j)`, every quantity here is a sum of powers of
//! the `z_j`. Each `z_j` costs one `sin_cos`; harmonics are reached by
//! repeated multiplication, so a periodogram value is `O(nK)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::estimator::FrequencyGrid;
use crate::linalg::PivotedCholesky;
use crate::sampling::TimeSeries;
use crate::signal::cycle_fraction;

/// Condition number of the Gram matrix above which it counts as singular.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// Relative tolerance on the imaginary part of the fitted quadratic form.
const QUAD_FORM_IMAG_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Harmonic count and candidate frequency of one periodogram evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicStack {
    k: usize,
    f: f64,
}

impl HarmonicStack {
    pub fn new(k: usize, f: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("harmonic count must be at least 1".into()));
        }
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::InvalidInput(format!("frequency must be positive, got {f}")));
        }
        Ok(HarmonicStack { k, f })
    }

    pub fn harmonics(&self) -> usize {
        self.k
    }

    pub fn frequency(&self) -> f64 {
        self.f
    }

    pub fn clsp(&self, data: &TimeSeries) -> f64 {
        clsp_unchecked(data.times(), data.values(), self.f, self.k)
    }
}

#[inline]
fn unit_phasor(f: f64, t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * cycle_fraction(f * t)).sin_cos();
    Complex64::new(c, -s)
}

/// `n^-1 sum_j exp(i t X_j)`.
///
/// # Panics
/// If `times` is empty.
pub fn empirical_char_fn(times: &[f64], t: f64) -> Complex64 {
    assert!(!times.is_empty(), "empirical characteristic function of no points");
    let sum: Complex64 = times
        .iter()
        .map(|&x| {
            let (s, c) = (t * x).sin_cos();
            Complex64::new(c, s)
        })
        .sum();
    sum / times.len() as f64
}

/// Cumulated periodogram
/// `n^-2 sum_{k=1}^{K} |sum_j Y_j exp(-2 pi i k f X_j)|^2`.
///
/// # Panics
/// If `f` is not positive or `k == 0`.
pub fn clsp(data: &TimeSeries, f: f64, k: usize) -> f64 {
    assert!(f.is_finite() && f > 0.0, "frequency must be positive");
    assert!(k >= 1, "harmonic count must be at least 1");
    clsp_unchecked(data.times(), data.values(), f, k)
}

fn clsp_unchecked(times: &[f64], values: &[f64], f: f64, k: usize) -> f64 {
    let mut acc = vec![ZERO; k];
    for (&t, &y) in times.iter().zip(values) {
        let z = unit_phasor(f, t);
        let mut p = z * y;
        for a in acc.iter_mut() {
            *a += p;
            p *= z;
        }
    }
    let n = times.len() as f64;
    acc.iter().map(|a| a.norm_sqr()).sum::<f64>() / (n * n)
}

/// Periodogram at every grid point, in grid order. Serial; the `cumlomb`
/// crate provides a parallel scan with identical output.
pub fn clsp_grid(data: &TimeSeries, grid: &FrequencyGrid, k: usize) -> Vec<f64> {
    assert!(k >= 1, "harmonic count must be at least 1");
    grid.iter().map(|f| clsp_unchecked(data.times(), data.values(), f, k)).collect()
}

/// Gram matrix and empirical Fourier coefficients of the harmonic
/// least-squares problem at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSystem {
    k: usize,
    f: f64,
    n: usize,
    /// Row-major, rows and columns indexed `-K..=K`.
    gram: Vec<Complex64>,
    /// `c_hat_l` for `l = -K..=K`.
    c_hat: Vec<Complex64>,
}

impl GramSystem {
    pub fn harmonics(&self) -> usize {
        self.k
    }

    pub fn frequency(&self) -> f64 {
        self.f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    /// `G_{k,l}` for `k, l` in `-K..=K`.
    pub fn gram(&self, k: i64, l: i64) -> Complex64 {
        let off = self.k as i64;
        self.gram[((k + off) as usize) * self.dim() + (l + off) as usize]
    }

    /// Row-major matrix, indices shifted by `K`.
    pub fn gram_matrix(&self) -> &[Complex64] {
        &self.gram
    }

    /// `c_hat_l` for `l` in `-K..=K`.
    pub fn c_hat(&self, l: i64) -> Complex64 {
        self.c_hat[(l + self.k as i64) as usize]
    }

    pub fn c_hat_vector(&self) -> &[Complex64] {
        &self.c_hat
    }

    fn factor(&self) -> Result<PivotedCholesky> {
        let chol = PivotedCholesky::new(self.dim(), self.gram.clone());
        let condition = chol.condition();
        if !(condition <= GRAM_CONDITION_LIMIT) {
            return Err(Error::SingularGram { f: self.f, k: self.k, condition });
        }
        Ok(chol)
    }

    /// Least-squares coefficients `c_tilde`, solving `G c = n c_hat`.
    pub fn coefficients(&self) -> Result<Vec<Complex64>> {
        let rhs: Vec<Complex64> = self.c_hat.iter().map(|c| c * self.n as f64).collect();
        Ok(self.factor()?.solve(&rhs))
    }

    /// `n^2 c_hat^H G^-1 c_hat`, the part of the data energy explained by the
    /// harmonic fit.
    pub fn explained_energy(&self) -> Result<f64> {
        let rhs: Vec<Complex64> = self.c_hat.iter().map(|c| c * self.n as f64).collect();
        let x = self.factor()?.solve(&rhs);
        let quad: Complex64 = rhs.iter().zip(&x).map(|(b, x)| b.conj() * x).sum();
        if quad.im.abs() > QUAD_FORM_IMAG_TOL * quad.re.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Consistency(format!(
                "quadratic form {quad} is not real at f = {} (K = {})",
                self.f, self.k
            )));
        }
        Ok(quad.re)
    }
}

/// Builds the Gram matrix from its `4K + 1` distinct diagonals.
pub fn gram_system(times: &[f64], values: &[f64], f: f64, k: usize) -> Result<GramSystem> {
    HarmonicStack::new(k, f)?;
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::InvalidInput(format!(
            "need equal, non-zero numbers of times and values (got {} and {})",
            times.len(),
            values.len()
        )));
    }
    let n = times.len();
    let dim = 2 * k + 1;
    // g[m] = sum_j z_j^m for m = 0..=2K; c[l] = sum_j Y_j z_j^l for l = 0..=K
    let mut g = vec![ZERO; 2 * k + 1];
    let mut c = vec![ZERO; k + 1];
    for (&t, &y) in times.iter().zip(values) {
        let z = unit_phasor(f, t);
        let mut p = Complex64::new(1.0, 0.0);
        for m in 0..=2 * k {
            g[m] += p;
            if m <= k {
                c[m] += p * y;
            }
            p *= z;
        }
    }
    g[0] = Complex64::new(n as f64, 0.0);
    let diag = |m: i64| if m >= 0 { g[m as usize] } else { g[(-m) as usize].conj() };

    let mut gram = vec![ZERO; dim * dim];
    for row in 0..dim {
        for col in 0..dim {
            gram[row * dim + col] = diag(row as i64 - col as i64);
        }
    }
    let inv_n = 1.0 / n as f64;
    let mut c_hat = vec![ZERO; dim];
    for l in 0..=k {
        c_hat[k + l] = c[l] * inv_n;
        c_hat[k - l] = c[l].conj() * inv_n;
    }
    c_hat[k].im = 0.0;
    Ok(GramSystem { k, f, n, gram, c_hat })
}

/// Residual sum of squares of the best degree-`K` harmonic fit at frequency
/// `f`: `sum_j Y_j^2 - n^2 c_hat^H G^-1 c_hat`.
pub fn ls_criterion(data: &TimeSeries, f: f64, k: usize) -> Result<f64> {
    let n = data.len();
    if n < 2 * k + 1 {
        return Err(Error::InvalidInput(format!(
            "least squares with K = {k} needs at least {} observations, got {n}",
            2 * k + 1
        )));
    }
    let system = gram_system(data.times(), data.values(), f, k)?;
    let energy: f64 = data.values().iter().map(|y| y * y).sum();
    Ok(energy - system.explained_energy()?)
}
