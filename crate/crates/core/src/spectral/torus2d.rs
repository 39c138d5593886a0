//! Tensor Fourier-Galerkin solve on the flat torus `[0, L) x [0, l)`.
//!
//! Used as an independent check of the separated 1D reduction: the potential
//! is sampled on a full 2D grid and no use is made of its fiber invariance.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;

use super::fourier::{basis_size, check_symmetric, sorted_eigen, synthesize, wavenumber};
use super::CircleSpectrum;
use crate::error::{Error, Result};
use crate::field::trig_resample;

fn basis_value(index: usize, phase: f64) -> f64 {
    if index == 0 {
        return 1.0;
    }
    let k = index.div_ceil(2) as f64;
    if index % 2 == 1 {
        SQRT_2 * (k * phase).cos()
    } else {
        SQRT_2 * (k * phase).sin()
    }
}

fn table(size: usize, n: usize) -> Vec<Vec<f64>> {
    (0..size)
        .map(|a| {
            (0..n)
                .map(|i| basis_value(a, 2.0 * PI * i as f64 / n as f64))
                .collect()
        })
        .collect()
}

pub(crate) fn solve(
    q: &[f64],
    length: f64,
    fiber: f64,
    modes: (usize, usize),
    grid: (usize, usize),
    m: usize,
) -> Result<CircleSpectrum> {
    let (ks, kt) = modes;
    let (ns, nt) = grid;
    if ns < 4 * ks + 1 || nt < 4 * kt + 1 {
        return Err(Error::invalid("grid_2d", "too coarse for the requested modes"));
    }
    let (bs, bt) = (basis_size(ks), basis_size(kt));
    let qs = trig_resample(q, ns);
    // q(s_i, t_j), replicated along the fibers
    let q2: Vec<Vec<f64>> = (0..nt).map(|_| qs.clone()).collect();
    let phi = table(bs, ns);
    let psi = table(bt, nt);

    // slice[j][(a, c)] = mean_i phi_a q(., t_j) phi_c
    let slices: Vec<DMatrix<f64>> = q2
        .iter()
        .map(|row| {
            DMatrix::from_fn(bs, bs, |a, c| {
                (0..ns).map(|i| phi[a][i] * row[i] * phi[c][i]).sum::<f64>() / ns as f64
            })
        })
        .collect();
    let n = bs * bt;
    let mut matrix = DMatrix::zeros(n, n);
    for b in 0..bt {
        for d in 0..bt {
            let weights: Vec<f64> = (0..nt).map(|j| psi[b][j] * psi[d][j] / nt as f64).collect();
            for a in 0..bs {
                for c in 0..bs {
                    let v: f64 = slices.iter().zip(&weights).map(|(s, w)| w * s[(a, c)]).sum();
                    matrix[(a * bt + b, c * bt + d)] = -v;
                }
            }
        }
    }
    for a in 0..bs {
        for b in 0..bt {
            let i = a * bt + b;
            matrix[(i, i)] += wavenumber(a, length).powi(2) + wavenumber(b, fiber).powi(2);
        }
    }
    check_symmetric(&matrix)?;
    let (mut values, vectors) = sorted_eigen(matrix);
    // restrict the ground state to the parallel t = 0
    let coef: Vec<f64> = (0..bs)
        .map(|a| {
            (0..bt)
                .map(|b| vectors[(a * bt + b, 0)] * basis_value(b, 0.0))
                .sum()
        })
        .collect();
    values.truncate(m.max(1));
    Ok(CircleSpectrum {
        eigenvalues: values,
        ground: synthesize(&coef, q.len()),
    })
}
