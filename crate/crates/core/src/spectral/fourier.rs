//! Fourier-Galerkin discretization of `-f'' - q f` on a circle.
//!
//! Basis, orthonormal for the mean inner product: index `0` is the constant,
//! `2k - 1` is `sqrt(2) cos(k w s)` and `2k` is `sqrt(2) sin(k w s)`, with
//! `w = 2 pi / L`. Writing `q = A_0 + 2 sum_m (A_m cos m w s + B_m sin m w s)`
//! the matrix entries are products of these coefficients.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::CircleSpectrum;
use crate::error::{Error, Result};

/// `(A_m, B_m)` for `m = 0..n/2`; modes at or above Nyquist are dropped.
pub(crate) fn real_coefficients(q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = q.len();
    let mut buf: Vec<Complex<f64>> = q.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n.div_ceil(2);
    let a = (0..half).map(|m| buf[m].re / n as f64).collect();
    let b = (0..half).map(|m| -buf[m].im / n as f64).collect();
    (a, b)
}

pub(crate) struct Coefficients {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Coefficients {
    pub(crate) fn new(q: &[f64]) -> Self {
        let (a, b) = real_coefficients(q);
        Self { a, b }
    }

    pub(crate) fn a(&self, m: i64) -> f64 {
        self.a.get(m.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    pub(crate) fn b(&self, m: i64) -> f64 {
        let v = self.b.get(m.unsigned_abs() as usize).copied().unwrap_or(0.0);
        if m < 0 {
            -v
        } else {
            v
        }
    }
}

pub(crate) fn basis_size(k: usize) -> usize {
    2 * k + 1
}

/// Galerkin matrix of the multiplication operator `q` in the real basis.
pub(crate) fn multiplication_matrix(c: &Coefficients, k: usize) -> DMatrix<f64> {
    let n = basis_size(k);
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut m = DMatrix::zeros(n, n);
    m[(0, 0)] = c.a(0);
    for kk in 1..=k as i64 {
        let (ck, sk) = (2 * kk as usize - 1, 2 * kk as usize);
        m[(0, ck)] = sqrt2 * c.a(kk);
        m[(0, sk)] = sqrt2 * c.b(kk);
        for jj in 1..=k as i64 {
            let (cj, sj) = (2 * jj as usize - 1, 2 * jj as usize);
            m[(cj, ck)] = c.a(jj - kk) + c.a(jj + kk);
            m[(sj, sk)] = c.a(jj - kk) - c.a(jj + kk);
            m[(cj, sk)] = c.b(kk + jj) + c.b(kk - jj);
            m[(sk, cj)] = m[(cj, sk)];
        }
        m[(ck, 0)] = m[(0, ck)];
        m[(sk, 0)] = m[(0, sk)];
    }
    m
}

pub(crate) fn wavenumber(index: usize, length: f64) -> f64 {
    let k = index.div_ceil(2) as f64;
    2.0 * PI * k / length
}

pub(crate) fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-14 * scale {
                return Err(Error::Internal(format!(
                    "Galerkin matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Sorted eigenpairs of a symmetric matrix.
pub(crate) fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Evaluate a coefficient vector of the real basis on `n` equispaced nodes.
pub(crate) fn synthesize(coef: &[f64], n: usize) -> Vec<f64> {
    let k = (coef.len() - 1) / 2;
    let sqrt2 = std::f64::consts::SQRT_2;
    (0..n)
        .map(|i| {
            let mut v = coef[0];
            for kk in 1..=k {
                let phase = 2.0 * PI * ((kk * i) % n) as f64 / n as f64;
                let (s, c) = phase.sin_cos();
                v += sqrt2 * (coef[2 * kk - 1] * c + coef[2 * kk] * s);
            }
            v
        })
        .collect()
}

pub(crate) fn solve_circle(q: &[f64], length: f64, k: usize, m: usize) -> Result<CircleSpectrum> {
    let n = basis_size(k);
    let first = q[0];
    if q.iter().all(|&v| v == first) {
        let mut eigenvalues: Vec<f64> = (0..n).map(|i| wavenumber(i, length).powi(2) - first).collect();
        eigenvalues.sort_by(f64::total_cmp);
        eigenvalues.truncate(m.max(1));
        return Ok(CircleSpectrum {
            eigenvalues,
            ground: vec![1.0; q.len()],
        });
    }
    let coefficients = Coefficients::new(q);
    let mut matrix = -multiplication_matrix(&coefficients, k);
    for i in 0..n {
        matrix[(i, i)] += wavenumber(i, length).powi(2);
    }
    check_symmetric(&matrix)?;
    let (mut values, vectors) = sorted_eigen(matrix);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Internal("non-finite eigenvalue".into()));
    }
    let ground: Vec<f64> = vectors.column(0).iter().copied().collect();
    values.truncate(m.max(1));
    Ok(CircleSpectrum {
        eigenvalues: values,
        ground: synthesize(&ground, q.len()),
    })
}
