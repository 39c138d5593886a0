//! Uniformly sampled scalar fields over a circle or a closed interval.
//!
//! Periodic grids place `n` nodes at `i * period / n`; interval grids place
//! `n` nodes at `start + i * (end - start) / (n - 1)`, endpoints included.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Periodic { period: f64 },
    Interval { start: f64, end: f64 },
}

/// How derivatives of sampled fields are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffBackend {
    /// FFT differentiation; periodic fields only.
    #[default]
    Spectral,
    /// Richardson-extrapolated central differences (fourth order).
    CentralRichardson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarField1D {
    samples: Vec<f64>,
    domain: Domain,
}

impl ScalarField1D {
    pub fn periodic(samples: Vec<f64>, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::NonPositive("period"));
        }
        Self::checked(samples, Domain::Periodic { period })
    }

    pub fn interval(samples: Vec<f64>, start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::invalid("interval", "end must exceed start"));
        }
        Self::checked(samples, Domain::Interval { start, end })
    }

    fn checked(samples: Vec<f64>, domain: Domain) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                got: samples.len(),
                min: MIN_SAMPLES,
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { samples, domain })
    }

    pub fn from_fn_periodic(n: usize, period: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = period / n as f64;
        Self::periodic((0..n).map(|i| f(i as f64 * h)).collect(), period)
    }

    pub fn from_fn_interval(n: usize, start: f64, end: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (end - start) / (n.max(2) - 1) as f64;
        Self::interval((0..n).map(|i| f(start + i as f64 * h)).collect(), start, end)
    }

    pub fn constant(n: usize, period: f64, value: f64) -> Result<Self> {
        Self::periodic(vec![value; n], period)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn period(&self) -> Option<f64> {
        match self.domain {
            Domain::Periodic { period } => Some(period),
            Domain::Interval { .. } => None,
        }
    }

    /// Length of the domain (period or interval width).
    pub fn extent(&self) -> f64 {
        match self.domain {
            Domain::Periodic { period } => period,
            Domain::Interval { start, end } => end - start,
        }
    }

    pub fn spacing(&self) -> f64 {
        match self.domain {
            Domain::Periodic { period } => period / self.len() as f64,
            Domain::Interval { start, end } => (end - start) / (self.len() - 1) as f64,
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        let start = match self.domain {
            Domain::Periodic { .. } => 0.0,
            Domain::Interval { start, .. } => start,
        };
        start + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    pub fn nearest_index(&self, x: f64) -> usize {
        let start = self.node(0);
        let i = ((x - start) / self.spacing()).round();
        match self.domain {
            Domain::Periodic { .. } => (i as i64).rem_euclid(self.len() as i64) as usize,
            Domain::Interval { .. } => i.clamp(0.0, (self.len() - 1) as f64) as usize,
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.domain == other.domain
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when the spread of samples is below `rel_tol * max(1, |max|)`.
    pub fn is_constant(&self, rel_tol: f64) -> bool {
        let (lo, hi) = (self.min(), self.max());
        hi - lo <= rel_tol * hi.abs().max(lo.abs()).max(1.0)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            samples: self.samples.iter().map(|&v| f(v)).collect(),
            domain: self.domain,
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::invalid("field", "grids differ"));
        }
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            domain: self.domain,
        })
    }

    /// Same samples, reinterpreted over a circle of a different length.
    pub fn with_period(&self, period: f64) -> Result<Self> {
        Self::periodic(self.samples.clone(), period)
    }

    /// Trapezoid-rule mean over the domain.
    ///
    /// Periodic samples are summed pairwise, so a constant field on a
    /// power-of-two grid averages to its value exactly.
    pub fn mean(&self) -> f64 {
        match self.domain {
            Domain::Periodic { .. } => pairwise_sum(&self.samples) / self.len() as f64,
            Domain::Interval { .. } => {
                let n = self.len();
                let inner = pairwise_sum(&self.samples[1..n - 1]);
                (inner + 0.5 * (self.samples[0] + self.samples[n - 1])) / (n - 1) as f64
            }
        }
    }

    pub fn integral(&self) -> f64 {
        self.mean() * self.extent()
    }

    pub fn derivative(&self, backend: DiffBackend) -> Result<Self> {
        let samples = match (backend, self.domain) {
            (DiffBackend::Spectral, Domain::Periodic { period }) => {
                spectral_derivative(&self.samples, period)
            }
            (DiffBackend::Spectral, Domain::Interval { .. }) => {
                return Err(Error::invalid(
                    "diff_backend",
                    "spectral differentiation needs a periodic field",
                ))
            }
            (DiffBackend::CentralRichardson, Domain::Periodic { .. }) => {
                central_periodic(&self.samples, self.spacing())
            }
            (DiffBackend::CentralRichardson, Domain::Interval { .. }) => {
                central_interval(&self.samples, self.spacing())
            }
        };
        Ok(Self {
            samples,
            domain: self.domain,
        })
    }
}

pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `d/dx` of periodic samples on `[0, period)` by FFT. The Nyquist mode is
/// dropped so real input gives real output.
pub(crate) fn spectral_derivative(samples: &[f64], period: f64) -> Vec<f64> {
    let n = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut buf);
    let omega = 2.0 * std::f64::consts::PI / period;
    for (j, c) in buf.iter_mut().enumerate() {
        let k = signed_mode(j, n);
        if 2 * k.unsigned_abs() as usize == n {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, omega * k as f64);
        }
    }
    inverse.process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// Band-limited (trigonometric) resampling of periodic samples onto `n`
/// equispaced nodes. The Nyquist mode of the input is dropped.
pub fn trig_resample(samples: &[f64], n: usize) -> Vec<f64> {
    let m = samples.len();
    if m == n {
        return samples.to_vec();
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(m).process(&mut buf);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, c) in buf.iter().enumerate() {
        let k = signed_mode(j, m);
        let ka = k.unsigned_abs() as usize;
        if 2 * ka == m || 2 * ka >= n {
            continue;
        }
        out[k.rem_euclid(n as i64) as usize] += *c / m as f64;
    }
    planner.plan_fft_inverse(n).process(&mut out);
    out.iter().map(|c| c.re).collect()
}

/// FFT index `j` as a signed wavenumber in `(-n/2, n/2]`.
pub(crate) fn signed_mode(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn central_periodic(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len() as i64;
    let at = |i: i64| f[i.rem_euclid(n) as usize];
    (0..n)
        .map(|i| {
            let d1 = (at(i + 1) - at(i - 1)) / (2.0 * h);
            let d2 = (at(i + 2) - at(i - 2)) / (4.0 * h);
            (4.0 * d1 - d2) / 3.0
        })
        .collect()
}

fn central_interval(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                let d1 = (f[i + 1] - f[i - 1]) / (2.0 * h);
                let d2 = (f[i + 2] - f[i - 2]) / (4.0 * h);
                (4.0 * d1 - d2) / 3.0
            } else if i < 2 {
                one_sided(f, i, h)
            } else {
                let rev: Vec<f64> = f[n - 5..].iter().rev().copied().collect();
                -one_sided(&rev, n - 1 - i, h)
            }
        })
        .collect()
}

// Fourth-order one-sided stencils at offsets 0 and 1 from the boundary.
fn one_sided(f: &[f64], offset: usize, h: f64) -> f64 {
    match offset {
        0 => (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h),
        _ => (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_short_or_nonfinite_fields() {
        assert!(matches!(
            ScalarField1D::periodic(vec![0.0; 4], 1.0),
            Err(Error::TooFewSamples { got: 4, .. })
        ));
        let mut v = vec![1.0; 16];
        v[3] = f64::NAN;
        assert!(ScalarField1D::periodic(v, 1.0).is_err());
        assert!(ScalarField1D::periodic(vec![1.0; 16], -1.0).is_err());
    }

    #[test]
    fn constant_mean_is_exact_on_power_of_two_grid() {
        let c = 0.1 + 0.2;
        let f = ScalarField1D::constant(256, 2.0 * PI, c).unwrap();
        assert_eq!(f.mean(), c);
        assert!(f.is_constant(1e-14));
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let f = ScalarField1D::from_fn_periodic(256, 2.0 * PI, f64::sin).unwrap();
        let d = f.derivative(DiffBackend::Spectral).unwrap();
        let err = d
            .nodes()
            .zip(d.samples())
            .map(|(x, v)| (v - x.cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "spectral error {err}");
    }

    #[test]
    fn richardson_derivative_of_sine() {
        let f = ScalarField1D::from_fn_periodic(256, 2.0 * PI, f64::sin).unwrap();
        let d = f.derivative(DiffBackend::CentralRichardson).unwrap();
        let err = d
            .nodes()
            .zip(d.samples())
            .map(|(x, v)| (v - x.cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "richardson error {err}");
    }

    #[test]
    fn interval_derivative_is_fourth_order_up_to_the_ends() {
        let f = ScalarField1D::from_fn_interval(201, 0.0, 2.0, |x| x.exp()).unwrap();
        let d = f.derivative(DiffBackend::CentralRichardson).unwrap();
        let err = d
            .nodes()
            .zip(d.samples())
            .map(|(x, v)| (v - x.exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-7, "interval error {err}");
        assert!(f.derivative(DiffBackend::Spectral).is_err());
    }

    #[test]
    fn resampling_is_exact_for_band_limited_fields() {
        let f = |x: f64| 1.0 + 0.3 * x.cos() - 0.2 * (3.0 * x).sin();
        let coarse: Vec<f64> = (0..32).map(|i| f(i as f64 * 2.0 * PI / 32.0)).collect();
        let fine = trig_resample(&coarse, 100);
        for (i, v) in fine.iter().enumerate() {
            assert!((v - f(i as f64 * 2.0 * PI / 100.0)).abs() < 1e-13);
        }
        let back = trig_resample(&fine, 32);
        for (a, b) in back.iter().zip(&coarse) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn interval_mean_is_trapezoid() {
        let f = ScalarField1D::from_fn_interval(101, 0.0, 1.0, |x| x).unwrap();
        assert!((f.mean() - 0.5).abs() < 1e-15);
        assert_eq!(f.nearest_index(0.5), 50);
    }
}
