//! Spectrum of the stability operator `J = Delta + q` on flat tori.
//!
//! Eigenvalues follow the convention `J f + lambda f = 0`, so they are the
//! eigenvalues of `-Delta - q` and strong stability means `lambda_1 >= 0`.
//! For potentials constant along the fibers the torus problem separates:
//! its spectrum is `{ mu_i + (2 pi k / l)^2 }` with `mu_i` the eigenvalues of
//! `-f'' - q f` on the circle of length `L`.

mod fd;
mod fourier;
mod torus2d;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{trig_resample, DiffBackend, ScalarField1D};
use crate::surface::{potential_field, KappaDescriptor, SurfaceField, SurfaceKind, SurfaceModel};

pub const DEFAULT_FOURIER_MODES: usize = 64;
pub const DEFAULT_FD_GRID: usize = 2048;
pub const DEFAULT_2D_MODES: (usize, usize) = (12, 4);
pub const DEFAULT_2D_GRID: (usize, usize) = (64, 64);
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-6;
pub const MIN_TRUNCATION: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Fourier-Galerkin on the circle, lifted to the torus by separation.
    #[default]
    Fourier,
    /// Second-order central differences on the circle.
    #[serde(alias = "fd")]
    FiniteDifference,
    /// Fourier-Galerkin on the full tensor basis of the torus.
    Fourier2d,
    /// Closed form (horizontal slices, where `J = Delta`).
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralDomain {
    Circle { length: f64 },
    Torus { length: f64, fiber: f64 },
}

impl SpectralDomain {
    pub fn length(&self) -> f64 {
        match *self {
            SpectralDomain::Circle { length } | SpectralDomain::Torus { length, .. } => length,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            SpectralDomain::Circle { length } => length,
            SpectralDomain::Torus { length, fiber } => length * fiber,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    pub backend: Backend,
    /// Fourier modes `K` (matrix size `2K + 1`) or finite-difference grid size.
    pub truncation: Option<usize>,
    pub modes_2d: (usize, usize),
    pub grid_2d: (usize, usize),
    pub convergence_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Fourier,
            truncation: None,
            modes_2d: DEFAULT_2D_MODES,
            grid_2d: DEFAULT_2D_GRID,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
        }
    }
}

impl SolverOptions {
    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_truncation(mut self, k: usize) -> Self {
        self.truncation = Some(k);
        self
    }

    pub fn resolved_truncation(&self) -> usize {
        self.truncation.unwrap_or(match self.backend {
            Backend::FiniteDifference => DEFAULT_FD_GRID,
            Backend::Fourier2d => self.modes_2d.0,
            _ => DEFAULT_FOURIER_MODES,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SpectralProblem {
    pub domain: SpectralDomain,
    /// `q`, constant along the fibers, sampled over the circle of length `L`.
    pub potential: ScalarField1D,
    pub options: SolverOptions,
}

impl SpectralProblem {
    pub fn new(domain: SpectralDomain, potential: ScalarField1D) -> Result<Self> {
        Self::with_options(domain, potential, SolverOptions::default())
    }

    pub fn with_options(
        domain: SpectralDomain,
        potential: ScalarField1D,
        options: SolverOptions,
    ) -> Result<Self> {
        let length = domain.length();
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NonPositive("domain length"));
        }
        if let SpectralDomain::Torus { fiber, .. } = domain {
            if !(fiber.is_finite() && fiber > 0.0) {
                return Err(Error::NonPositive("fiber length"));
            }
        }
        let period = potential
            .period()
            .ok_or_else(|| Error::invalid("potential", "must be periodic"))?;
        if (period - length).abs() > 1e-12 * length {
            return Err(Error::PeriodMismatch {
                expected: length,
                got: period,
            });
        }
        if options.resolved_truncation() < MIN_TRUNCATION {
            return Err(Error::invalid(
                "truncation",
                format!("must be at least {MIN_TRUNCATION}"),
            ));
        }
        if options.backend == Backend::Analytic {
            return Err(Error::invalid(
                "backend",
                "analytic results are not solvable problems",
            ));
        }
        if !(options.convergence_tol > 0.0) {
            return Err(Error::NonPositive("convergence_tol"));
        }
        Ok(Self {
            domain,
            potential,
            options,
        })
    }

    pub fn area(&self) -> f64 {
        self.domain.area()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralResult {
    pub lambda1: f64,
    /// Lowest eigenvalues of `-Delta - q`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Positive first eigenfunction along the curve, `integral rho^2 = area`.
    pub ground_state: ScalarField1D,
    pub backend: Backend,
    pub truncation: usize,
    pub convergence_estimate: f64,
}

/// Eigenvalues of the circle problem with a ground state on the potential grid.
pub(crate) struct CircleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub ground: Vec<f64>,
}

pub fn solve(p: &SpectralProblem, m: usize) -> Result<SpectralResult> {
    if m == 0 {
        return Err(Error::invalid("m", "must request at least one eigenvalue"));
    }
    let length = p.domain.length();
    let trunc = p.options.resolved_truncation();
    let q = p.potential.samples();
    let (eigenvalues, ground, estimate) = match p.options.backend {
        Backend::Fourier => {
            let fine = fourier::solve_circle(q, length, trunc, m)?;
            let coarse = fourier::solve_circle(q, length, (trunc / 2).max(2), 1)?;
            let est = (fine.eigenvalues[0] - coarse.eigenvalues[0]).abs();
            (lift_to_domain(&fine.eigenvalues, p.domain, m), fine.ground, est)
        }
        Backend::FiniteDifference => {
            let fine = fd::solve_circle(&trig_resample(q, trunc), length, m)?;
            let coarse = fd::solve_circle(&trig_resample(q, trunc / 2), length, 1)?;
            // Richardson error estimate for a second-order scheme
            let est = (fine.eigenvalues[0] - coarse.eigenvalues[0]).abs() / 3.0;
            let ground = trig_resample(&fine.ground, q.len());
            (lift_to_domain(&fine.eigenvalues, p.domain, m), ground, est)
        }
        Backend::Fourier2d => {
            let SpectralDomain::Torus { fiber, .. } = p.domain else {
                return Err(Error::invalid("backend", "fourier2d needs a torus domain"));
            };
            let (ks, kt) = (trunc, p.options.modes_2d.1);
            let grid = p.options.grid_2d;
            let fine = torus2d::solve(q, length, fiber, (ks, kt), grid, m)?;
            let coarse = torus2d::solve(q, length, fiber, ((ks / 2).max(2), (kt / 2).max(1)), grid, 1)?;
            let est = (fine.eigenvalues[0] - coarse.eigenvalues[0]).abs();
            (fine.eigenvalues, fine.ground, est)
        }
        Backend::Analytic => unreachable!("rejected when the problem is built"),
    };
    if estimate > p.options.convergence_tol {
        return Err(Error::NotConverged {
            estimate,
            tolerance: p.options.convergence_tol,
        });
    }
    let ground_state = normalize_ground_state(ground, length, p.area())?;
    Ok(SpectralResult {
        lambda1: eigenvalues[0],
        eigenvalues,
        ground_state,
        backend: p.options.backend,
        truncation: trunc,
        convergence_estimate: estimate,
    })
}

/// Merge circle eigenvalues with the fiber modes `(2 pi k / l)^2`.
fn lift_to_domain(circle: &[f64], domain: SpectralDomain, m: usize) -> Vec<f64> {
    let fiber = match domain {
        SpectralDomain::Circle { .. } => return circle.iter().take(m).copied().collect(),
        SpectralDomain::Torus { fiber, .. } => fiber,
    };
    let step = 2.0 * PI / fiber;
    let top = circle[circle.len().min(m) - 1];
    let kmax = ((top - circle[0]).max(0.0).sqrt() / step).ceil() as i64 + 1;
    let mut all: Vec<f64> = circle
        .iter()
        .flat_map(|&mu| (-kmax..=kmax).map(move |k| mu + (step * k as f64).powi(2)))
        .collect();
    all.sort_by(f64::total_cmp);
    all.truncate(m);
    all
}

fn normalize_ground_state(mut rho: Vec<f64>, length: f64, area: f64) -> Result<ScalarField1D> {
    let n = rho.len() as f64;
    let mean: f64 = rho.iter().sum::<f64>() / n;
    if mean < 0.0 {
        rho.iter_mut().for_each(|v| *v = -*v);
    }
    // mean(rho^2) = 1 gives integral rho^2 = area on the torus
    let ms = rho.iter().map(|v| v * v).sum::<f64>() / n;
    let scale = 1.0 / ms.sqrt();
    rho.iter_mut().for_each(|v| *v *= scale);
    if rho.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Internal("ground state changes sign".into()));
    }
    let _ = area;
    ScalarField1D::periodic(rho, length)
}

/// Spectral problem of a Hopf torus, or `None` for a horizontal slice.
pub fn surface_problem(s: &SurfaceModel, options: SolverOptions) -> Result<Option<SpectralProblem>> {
    match s.kind() {
        SurfaceKind::Horizontal(_) => Ok(None),
        SurfaceKind::Hopf(t) => {
            let SurfaceField::Sampled(q) = potential_field(s)? else {
                return Err(Error::Internal("Hopf potential must be sampled".into()));
            };
            SpectralProblem::with_options(
                SpectralDomain::Torus {
                    length: t.curve_length,
                    fiber: t.fiber_length,
                },
                q,
                options,
            )
            .map(Some)
        }
    }
}

/// Solve the stability operator of a surface. Slices have `J = Delta`, whose
/// lowest eigenvalue is `0` with constant eigenfunction; higher eigenvalues
/// are reported only for round spheres (`l (l + 1) kappa`).
pub fn solve_surface(s: &SurfaceModel, options: SolverOptions, m: usize) -> Result<SpectralResult> {
    match surface_problem(s, options)? {
        Some(p) => solve(&p, m),
        None => {
            let slice = s.as_slice().expect("non-Hopf surfaces are slices");
            let mut eigenvalues = vec![0.0];
            if let (KappaDescriptor::Constant(k), 0) = (&slice.kappa, slice.genus) {
                let mut l = 1u32;
                while eigenvalues.len() < m {
                    let mu = (l * (l + 1)) as f64 * k;
                    eigenvalues.extend(std::iter::repeat_n(mu, (2 * l + 1) as usize));
                    l += 1;
                }
                eigenvalues.truncate(m);
            }
            Ok(SpectralResult {
                lambda1: 0.0,
                eigenvalues,
                ground_state: ScalarField1D::constant(64, slice.base_area, 1.0)?,
                backend: Backend::Analytic,
                truncation: 0,
                convergence_estimate: 0.0,
            })
        }
    }
}

/// `(integral |f'|^2 - integral q f^2) / integral f^2` on the potential grid.
pub fn rayleigh_quotient(p: &SpectralProblem, f: &ScalarField1D) -> Result<f64> {
    if !f.same_grid(&p.potential) {
        return Err(Error::invalid("f", "must share the potential grid"));
    }
    let norm = f.samples().iter().map(|v| v * v).sum::<f64>();
    if norm == 0.0 {
        return Err(Error::invalid("f", "zero function"));
    }
    let df = f.derivative(DiffBackend::Spectral)?;
    let kinetic: f64 = df.samples().iter().map(|v| v * v).sum();
    let potential: f64 = f
        .samples()
        .iter()
        .zip(p.potential.samples())
        .map(|(v, q)| q * v * v)
        .sum();
    Ok((kinetic - potential) / norm)
}

/// `alpha = integral rho^{-2} |grad rho|^2` over a torus of the given area
/// for a ground state that is constant along the fibers.
pub fn alpha_invariant(rho: &ScalarField1D, area: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::NonPositive("area"));
    }
    if rho.samples().iter().any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("rho", "must be strictly positive"));
    }
    if rho.is_constant(0.0) {
        return Ok(0.0);
    }
    let d = rho.derivative(DiffBackend::Spectral)?;
    let log_grad = d.zip_map(rho, |dr, r| (dr / r) * (dr / r))?;
    Ok(area * log_grad.mean())
}

/// `|lambda_1 + (alpha + integral (|A|^2 + Ric(N, N))) / Area|`.
pub fn lambda1_identity_check(s: &SurfaceModel, result: &SpectralResult) -> Result<f64> {
    let area = s.area();
    let alpha = alpha_invariant(&result.ground_state, area)?;
    let q_mean = potential_field(s)?.mean();
    Ok((result.lambda1 + alpha / area + q_mean).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submersion::{homogeneous_model, product_model};
    use crate::surface::{constant_hopf_torus, hopf_torus, horizontal_slice};

    const TWO_PI: f64 = 2.0 * PI;

    fn circle(q: impl Fn(f64) -> f64, n: usize) -> SpectralProblem {
        let field = ScalarField1D::from_fn_periodic(n, TWO_PI, q).unwrap();
        SpectralProblem::new(SpectralDomain::Circle { length: TWO_PI }, field).unwrap()
    }

    #[test]
    fn constant_potential_has_closed_form_spectrum() {
        let mut p = circle(|_| 4.0, 256);
        p.domain = SpectralDomain::Torus {
            length: TWO_PI,
            fiber: 3.0,
        };
        let r = solve(&p, 3).unwrap();
        assert!((r.lambda1 + 4.0).abs() < 1e-12);
        assert!(r.ground_state.samples().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn free_laplacian_on_torus() {
        for (l, fib) in [(TWO_PI, 3.0), (2.0, 7.5)] {
            let field = ScalarField1D::constant(128, l, 0.0).unwrap();
            let p = SpectralProblem::new(
                SpectralDomain::Torus {
                    length: l,
                    fiber: fib,
                },
                field,
            )
            .unwrap();
            let r = solve(&p, 3).unwrap();
            assert!(r.lambda1.abs() < 1e-12);
            let expect = (TWO_PI / l.max(fib)).powi(2);
            assert!((r.eigenvalues[1] - expect).abs() < 1e-10, "{l} {fib}");
            assert!((r.eigenvalues[2] - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_problems() {
        let field = ScalarField1D::constant(64, 3.0, 1.0).unwrap();
        assert!(matches!(
            SpectralProblem::new(SpectralDomain::Circle { length: TWO_PI }, field.clone()),
            Err(Error::PeriodMismatch { .. })
        ));
        let opts = SolverOptions::default().with_truncation(2);
        assert!(SpectralProblem::with_options(SpectralDomain::Circle { length: 3.0 }, field, opts).is_err());
    }

    #[test]
    fn too_coarse_truncation_is_reported() {
        // steep potential: eight modes cannot resolve it
        let field = ScalarField1D::from_fn_periodic(256, TWO_PI, |s| 40.0 * (4.0 * s).cos()).unwrap();
        let opts = SolverOptions {
            convergence_tol: 1e-10,
            ..SolverOptions::default().with_truncation(8)
        };
        let p =
            SpectralProblem::with_options(SpectralDomain::Circle { length: TWO_PI }, field, opts).unwrap();
        assert!(matches!(solve(&p, 1), Err(Error::NotConverged { .. })));
    }

    #[test]
    fn mathieu_backends_agree() {
        let q = |s: f64| 1.0 + 0.3 * s.cos();
        let fourier = solve(&circle(q, 256), 4).unwrap();
        let mut fd = circle(q, 256);
        fd.options = SolverOptions::default()
            .with_backend(Backend::FiniteDifference)
            .with_truncation(4096);
        let fd = solve(&fd, 4).unwrap();
        assert!(
            (fourier.lambda1 - fd.lambda1).abs() < 1e-7,
            "{} {}",
            fourier.lambda1,
            fd.lambda1
        );
        assert!(fourier.eigenvalues[1] - fourier.eigenvalues[0] > 0.0);
        assert!(fd.ground_state.samples().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn torus_reduction_matches_full_tensor_solve() {
        let field = ScalarField1D::from_fn_periodic(256, TWO_PI, |s| 1.0 + 0.3 * s.cos()).unwrap();
        let domain = SpectralDomain::Torus {
            length: TWO_PI,
            fiber: 2.0,
        };
        let one = solve(&SpectralProblem::new(domain, field.clone()).unwrap(), 5).unwrap();
        let opts = SolverOptions::default().with_backend(Backend::Fourier2d);
        let two = solve(&SpectralProblem::with_options(domain, field, opts).unwrap(), 5).unwrap();
        for (a, b) in one.eigenvalues.iter().zip(&two.eigenvalues) {
            assert!((a - b).abs() < 1e-8, "{a} {b}");
        }
    }

    #[test]
    fn shift_moves_constant_spectrum_exactly() {
        for c in [0.5, -3.25, 10.0] {
            let a = solve(&circle(|_| 2.0, 256), 5).unwrap();
            let b = solve(&circle(|_| 2.0 + c, 256), 5).unwrap();
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert_eq!(y.to_bits(), (x - c).to_bits(), "{x} {y} {c}");
            }
        }
    }

    #[test]
    fn shift_covariance_for_smooth_potential() {
        let a = solve(&circle(|s| 1.0 + 0.3 * s.cos(), 256), 5).unwrap();
        let b = solve(&circle(|s| 3.5 + 0.3 * s.cos(), 256), 5).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((y - (x - 2.5)).abs() < 1e-11);
        }
    }

    #[test]
    fn rayleigh_quotient_examples() {
        let p = circle(|_| 4.0, 128);
        let one = ScalarField1D::constant(128, TWO_PI, 1.0).unwrap();
        assert!((rayleigh_quotient(&p, &one).unwrap() + 4.0).abs() < 1e-14);
        let zero = ScalarField1D::constant(128, TWO_PI, 0.0).unwrap();
        assert!(rayleigh_quotient(&p, &zero).is_err());

        let p = circle(|s| 1.0 + 0.3 * s.cos(), 256);
        let r = solve(&p, 1).unwrap();
        let rq = rayleigh_quotient(&p, &r.ground_state).unwrap();
        assert!((rq - r.lambda1).abs() < 1e-9);
        let trial = ScalarField1D::from_fn_periodic(256, TWO_PI, |s| 1.0 + 0.5 * (2.0 * s).sin()).unwrap();
        assert!(rayleigh_quotient(&p, &trial).unwrap() >= r.lambda1 - 1e-9);
    }

    #[test]
    fn alpha_of_constant_and_ground_states() {
        let c = ScalarField1D::constant(64, TWO_PI, 2.0).unwrap();
        assert_eq!(alpha_invariant(&c, TWO_PI).unwrap(), 0.0);
        let r = solve(&circle(|_| 3.0, 64), 1).unwrap();
        assert_eq!(alpha_invariant(&r.ground_state, TWO_PI).unwrap(), 0.0);
        let bad = ScalarField1D::from_fn_periodic(64, TWO_PI, f64::sin).unwrap();
        assert!(alpha_invariant(&bad, TWO_PI).is_err());
    }

    #[test]
    fn identity_for_tori_and_slices() {
        let m = homogeneous_model(4.0, 0.5, TWO_PI).unwrap();
        let s = constant_hopf_torus(&m, TWO_PI, 0.0, 4.0, 0.5).unwrap();
        let r = solve_surface(&s, SolverOptions::default(), 1).unwrap();
        assert!(lambda1_identity_check(&s, &r).unwrap() < 1e-8);

        let kappa = ScalarField1D::from_fn_periodic(256, TWO_PI, |v| 1.0 + 0.3 * v.cos()).unwrap();
        let prod = product_model(kappa.clone(), TWO_PI).unwrap();
        let torus = hopf_torus(&prod, TWO_PI, 0.0, kappa.clone(), kappa.map(|_| 0.0)).unwrap();
        let r = solve_surface(&torus, SolverOptions::default(), 2).unwrap();
        assert!(lambda1_identity_check(&torus, &r).unwrap() < 1e-6);

        let sphere_model = product_model(ScalarField1D::constant(64, TWO_PI, 1.0).unwrap(), TWO_PI).unwrap();
        let slice = horizontal_slice(&sphere_model, 4.0 * PI, 0, KappaDescriptor::Constant(1.0)).unwrap();
        let r = solve_surface(&slice, SolverOptions::default(), 5).unwrap();
        assert_eq!(r.lambda1, 0.0);
        assert_eq!(r.eigenvalues, vec![0.0, 2.0, 2.0, 2.0, 6.0]);
        assert_eq!(lambda1_identity_check(&slice, &r).unwrap(), 0.0);
    }
}
