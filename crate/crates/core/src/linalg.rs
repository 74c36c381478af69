//! Small dense factorizations used by the trigonometric fit and the Gram solve.
//!
//! Both are rank revealing: the ratio of the first to the last pivot gives a
//! cheap lower bound on the condition number, which callers compare against
//! their own thresholds.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Householder QR with column pivoting of a column-major `rows x cols` matrix.
pub(crate) struct PivotedQr {
    rows: usize,
    cols: usize,
    /// Householder vectors below the diagonal, R on and above it.
    qr: Vec<f64>,
    /// Leading entry of each Householder vector (the rest is stored in `qr`).
    tau: Vec<f64>,
    rdiag: Vec<f64>,
    perm: Vec<usize>,
}

impl PivotedQr {
    pub(crate) fn new(rows: usize, cols: usize, mut a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), rows * cols);
        debug_assert!(rows >= cols);
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut tau = vec![0.0; cols];
        let mut rdiag = vec![0.0; cols];
        let mut norms = vec![0.0; cols];

        for k in 0..cols {
            // Pivot: the remaining column with largest trailing norm. Norms are
            // recomputed rather than downdated; the systems here are tiny.
            for j in k..cols {
                norms[j] = a[j * rows + k..(j + 1) * rows].iter().map(|v| v * v).sum();
            }
            let mut best = k;
            for j in k + 1..cols {
                if norms[j] > norms[best] {
                    best = j;
                }
            }
            if best != k {
                for i in 0..rows {
                    a.swap(k * rows + i, best * rows + i);
                }
                perm.swap(k, best);
                norms.swap(k, best);
            }

            let col = &mut a[k * rows..(k + 1) * rows];
            let alpha = norms[k].sqrt();
            if alpha == 0.0 {
                rdiag[k] = 0.0;
                tau[k] = 0.0;
                continue;
            }
            let alpha = if col[k] > 0.0 { -alpha } else { alpha };
            // v = x - alpha e_k, stored in col[k..], with v_k kept in tau.
            let vk = col[k] - alpha;
            col[k] = alpha;
            tau[k] = vk;
            let vnorm_sq = vk * vk + col[k + 1..].iter().map(|v| v * v).sum::<f64>();
            rdiag[k] = alpha;
            if vnorm_sq == 0.0 {
                continue;
            }
            let (head, tail) = a.split_at_mut((k + 1) * rows);
            let v_rest = &head[k * rows + k + 1..(k + 1) * rows];
            for j in 0..cols - k - 1 {
                let c = &mut tail[j * rows..(j + 1) * rows];
                let dot = vk * c[k] + v_rest.iter().zip(&c[k + 1..]).map(|(v, x)| v * x).sum::<f64>();
                let s = 2.0 * dot / vnorm_sq;
                c[k] -= s * vk;
                for (x, v) in c[k + 1..].iter_mut().zip(v_rest) {
                    *x -= s * v;
                }
            }
        }
        PivotedQr { rows, cols, qr: a, tau, rdiag, perm }
    }

    /// `|r_00| / |r_pp|`, infinite when the last pivot vanishes.
    pub(crate) fn condition(&self) -> f64 {
        let first = self.rdiag[0].abs();
        let last = self.rdiag[self.cols - 1].abs();
        if last == 0.0 {
            f64::INFINITY
        } else {
            first / last
        }
    }

    /// Original index of the weakest (last pivoted) column.
    pub(crate) fn weakest_column(&self) -> usize {
        self.perm[self.cols - 1]
    }

    /// Least-squares solution of `A x = b`.
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rows = self.rows;
        let mut y = b.to_vec();
        for k in 0..self.cols {
            let vk = self.tau[k];
            let v_rest = &self.qr[k * rows + k + 1..(k + 1) * rows];
            let vnorm_sq = vk * vk + v_rest.iter().map(|v| v * v).sum::<f64>();
            if vnorm_sq == 0.0 {
                continue;
            }
            let dot = vk * y[k] + v_rest.iter().zip(&y[k + 1..]).map(|(v, x)| v * x).sum::<f64>();
            let s = 2.0 * dot / vnorm_sq;
            y[k] -= s * vk;
            for (x, v) in y[k + 1..].iter_mut().zip(v_rest) {
                *x -= s * v;
            }
        }
        let mut z = vec![0.0; self.cols];
        for k in (0..self.cols).rev() {
            let mut acc = y[k];
            for j in k + 1..self.cols {
                acc -= self.qr[j * rows + k] * z[j];
            }
            z[k] = acc / self.rdiag[k];
        }
        let mut x = vec![0.0; self.cols];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

/// Cholesky factorization with diagonal pivoting of a Hermitian positive
/// semidefinite matrix: `P^T G P = L L^H`.
pub(crate) struct PivotedCholesky {
    dim: usize,
    /// Row-major lower factor.
    lower: Vec<Complex64>,
    perm: Vec<usize>,
    pivots: Vec<f64>,
}

impl PivotedCholesky {
    /// Factors the row-major `dim x dim` Hermitian matrix `g`. Stops early
    /// when a pivot is not strictly positive; `condition` is then infinite.
    pub(crate) fn new(dim: usize, mut g: Vec<Complex64>) -> Self {
        debug_assert_eq!(g.len(), dim * dim);
        let mut perm: Vec<usize> = (0..dim).collect();
        let mut pivots = vec![0.0; dim];
        let mut lower = vec![Complex64::new(0.0, 0.0); dim * dim];

        for k in 0..dim {
            let mut best = k;
            for j in k + 1..dim {
                if g[j * dim + j].re > g[best * dim + best].re {
                    best = j;
                }
            }
            if best != k {
                swap_sym(&mut g, dim, k, best);
                for c in 0..k {
                    lower.swap(k * dim + c, best * dim + c);
                }
                perm.swap(k, best);
            }
            let d = g[k * dim + k].re;
            if !(d > 0.0) {
                break;
            }
            pivots[k] = d;
            let lkk = d.sqrt();
            lower[k * dim + k] = Complex64::new(lkk, 0.0);
            for i in k + 1..dim {
                lower[i * dim + k] = g[i * dim + k] / lkk;
            }
            for i in k + 1..dim {
                let lik = lower[i * dim + k];
                for j in k + 1..=i {
                    let upd = lik * lower[j * dim + k].conj();
                    g[i * dim + j] -= upd;
                    if i != j {
                        g[j * dim + i] = g[i * dim + j].conj();
                    }
                }
            }
        }
        PivotedCholesky { dim, lower, perm, pivots }
    }

    /// Ratio of the largest to the smallest pivot.
    pub(crate) fn condition(&self) -> f64 {
        let last = self.pivots[self.dim - 1];
        if last > 0.0 {
            self.pivots[0] / last
        } else {
            f64::INFINITY
        }
    }

    /// Solves `G x = b`. Only meaningful when `condition` is finite.
    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lower[i * n + j] * y[j];
            }
            y[i] = acc / self.lower[i * n + i].re;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lower[j * n + i].conj() * y[j];
            }
            y[i] = acc / self.lower[i * n + i].re;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

fn swap_sym(g: &mut [Complex64], dim: usize, a: usize, b: usize) {
    for c in 0..dim {
        g.swap(a * dim + c, b * dim + c);
    }
    for r in 0..dim {
        g.swap(r * dim + a, r * dim + b);
    }
}
