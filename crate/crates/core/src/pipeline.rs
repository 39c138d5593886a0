//! Scenario execution: model and surface construction, spectral solve,
//! bounds, identity residuals and data series.

use serde::Serialize;

use crate::bounds::{evaluate, BoundReport};
use crate::error::Result;
use crate::geometry::Regime;
use crate::report::Table;
use crate::scenario::{Scenario, Series};
use crate::spectral::{
    lambda1_identity_check, rayleigh_quotient, solve_surface, surface_problem, Backend, SpectralResult,
};
use crate::submersion::{GradientMode, ModelKind, SubmersionModel};
use crate::surface::{gauss_bonnet_check, potential_field, SurfaceKind, SurfaceModel};
use crate::warped::{parallel_hopf_torus_sampled, theorem_bounds, warped_displayed_bounds};

/// Command-line overrides applied on top of a scenario.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub gradient_mode: Option<GradientMode>,
    pub backend: Option<Backend>,
    pub truncation: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, scenario: &Scenario) -> Scenario {
        let mut s = scenario.clone();
        if let Some(m) = self.gradient_mode {
            s.gradient_mode = m;
        }
        if let Some(b) = self.backend {
            s.solver.backend = b;
        }
        if let Some(k) = self.truncation {
            s.solver.truncation = Some(k);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub kind: ModelKind,
    pub name: String,
    pub description: String,
    pub regime: Regime,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceTag {
    HopfTorus,
    HorizontalSlice,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSummary {
    pub kind: SurfaceTag,
    pub area: f64,
    pub genus: u32,
    pub mean_curvature: f64,
    pub abs_mean_curvature: f64,
    pub regime: Regime,
    pub curve_length: Option<f64>,
    pub fiber_length: Option<f64>,
    pub parallel: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary {
    pub backend: Backend,
    pub truncation: usize,
    pub lambda1: f64,
    pub eigenvalues: Vec<f64>,
    pub convergence_estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Residuals {
    /// `|lambda_1 + (alpha + integral q) / Area|`.
    pub lambda1_identity: f64,
    pub gauss_bonnet: f64,
    /// `|lambda_1 - (-4 H^2 - kappa)|` on Hopf tori with constant data.
    pub hopf_closed_form: Option<f64>,
    /// Rayleigh quotient of the ground state minus `lambda_1`.
    pub ground_state_rayleigh: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WarpedComparison {
    pub u: f64,
    pub theta_second_derivative: f64,
    pub displayed_bound_i: f64,
    pub displayed_bound_ii: f64,
    pub ambient_bound_i: f64,
    pub ambient_bound_ii: f64,
    pub intrinsic_bound_i: f64,
    pub intrinsic_bound_ii: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub version: u32,
    pub gradient_mode: GradientMode,
    pub model: ModelSummary,
    pub surface: SurfaceSummary,
    pub spectrum: SpectrumSummary,
    pub bounds: BoundReport,
    pub residuals: Residuals,
    pub warped: Option<WarpedComparison>,
    pub anomalies: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    /// `(series name, CSV text)`.
    pub series: Vec<(&'static str, String)>,
}

impl RunOutput {
    pub fn is_anomalous(&self) -> bool {
        !self.report.anomalies.is_empty()
    }
}

fn summarize_surface(s: &SurfaceModel) -> SurfaceSummary {
    let hopf = s.as_hopf();
    SurfaceSummary {
        kind: match s.kind() {
            SurfaceKind::Hopf(_) => SurfaceTag::HopfTorus,
            SurfaceKind::Horizontal(_) => SurfaceTag::HorizontalSlice,
        },
        area: s.area(),
        genus: s.genus(),
        mean_curvature: s.mean_curvature(),
        abs_mean_curvature: s.mean_curvature().abs(),
        regime: s.regime(),
        curve_length: hopf.map(|t| t.curve_length),
        fiber_length: hopf.map(|t| t.fiber_length),
        parallel: hopf.and_then(|t| t.parallel),
    }
}

fn hopf_closed_form(s: &SurfaceModel, lambda1: f64) -> Option<f64> {
    let t = s.as_hopf()?;
    if !(s.kappa_is_constant() && s.tau_is_constant()) {
        return None;
    }
    let h = s.mean_curvature();
    Some((lambda1 - (-4.0 * h * h - t.kappa_on_curve.samples()[0])).abs())
}

fn warped_comparison(model: &SubmersionModel, s: &SurfaceModel) -> Result<Option<WarpedComparison>> {
    let (Some(profile), Some(u)) = (model.profile(), s.as_hopf().and_then(|t| t.parallel)) else {
        return Ok(None);
    };
    let Ok((d1, d2)) = warped_displayed_bounds(model, s) else {
        return Ok(None);
    };
    let (a1, a2) = theorem_bounds(s, GradientMode::Ambient)?;
    let (i1, i2) = theorem_bounds(s, GradientMode::IntrinsicOnSurface)?;
    Ok(Some(WarpedComparison {
        u,
        theta_second_derivative: profile.jet(u)?.d2,
        displayed_bound_i: d1,
        displayed_bound_ii: d2,
        ambient_bound_i: a1,
        ambient_bound_ii: a2,
        intrinsic_bound_i: i1,
        intrinsic_bound_ii: i2,
    }))
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunOutput> {
    let model = scenario.build_model()?;
    let surface = scenario.build_surface(&model)?;
    let options = scenario.solver.options();
    let result = solve_surface(&surface, options, scenario.solver.eigenvalues)?;
    let mode = scenario.gradient_mode;
    let bounds = evaluate(&surface, result.lambda1, mode, &scenario.bound_options())?;

    let ground_state_rayleigh = match surface_problem(&surface, options)? {
        Some(p) => Some(rayleigh_quotient(&p, &result.ground_state)? - result.lambda1),
        None => None,
    };
    let residuals = Residuals {
        lambda1_identity: lambda1_identity_check(&surface, &result)?,
        gauss_bonnet: gauss_bonnet_check(&surface),
        hopf_closed_form: hopf_closed_form(&surface, result.lambda1),
        ground_state_rayleigh,
    };
    let mut anomalies = bounds.anomalies();
    if let Some(r) = residuals.hopf_closed_form.filter(|&r| r > 1e-8) {
        anomalies.push(format!("lambda1 misses -4H^2 - kappa by {r}"));
    }

    let mut series = Vec::new();
    for kind in &scenario.outputs.csv {
        let table = match kind {
            Series::Potential => potential_table(&surface)?,
            Series::GroundState => ground_state_table(&result),
            Series::Convergence => convergence_table(scenario, &surface)?,
            Series::Sweep => sweep_table(scenario, &model)?,
        };
        series.push((series_name(*kind), table.to_csv()?));
    }

    let report = RunReport {
        scenario: scenario.name.clone(),
        version: scenario.version,
        gradient_mode: mode,
        model: ModelSummary {
            kind: model.kind,
            name: model.name.clone(),
            description: model.description.clone(),
            regime: model.regime(),
        },
        surface: summarize_surface(&surface),
        spectrum: SpectrumSummary {
            backend: result.backend,
            truncation: result.truncation,
            lambda1: result.lambda1,
            eigenvalues: result.eigenvalues.clone(),
            convergence_estimate: result.convergence_estimate,
        },
        residuals,
        warped: warped_comparison(&model, &surface)?,
        bounds,
        anomalies,
    };
    Ok(RunOutput { report, series })
}

pub fn series_name(kind: Series) -> &'static str {
    match kind {
        Series::Potential => "potential",
        Series::GroundState => "ground_state",
        Series::Convergence => "convergence",
        Series::Sweep => "sweep",
    }
}

fn potential_table(s: &SurfaceModel) -> Result<Table> {
    let mut t = Table::new(&["s", "q"]);
    match potential_field(s)? {
        crate::surface::SurfaceField::Sampled(q) => {
            for (x, v) in q.nodes().zip(q.samples()) {
                t.push(vec![x, *v]);
            }
        }
        crate::surface::SurfaceField::Constant(c) => t.push(vec![0.0, c]),
    }
    Ok(t)
}

fn ground_state_table(r: &SpectralResult) -> Table {
    let mut t = Table::new(&["s", "rho"]);
    for (x, v) in r.ground_state.nodes().zip(r.ground_state.samples()) {
        t.push(vec![x, *v]);
    }
    t
}

fn convergence_table(scenario: &Scenario, s: &SurfaceModel) -> Result<Table> {
    let mut t = Table::new(&["truncation", "lambda1", "convergence_estimate"]);
    let opts = scenario.solver.options();
    let top = opts.resolved_truncation();
    let mut k = top;
    let mut levels = Vec::new();
    while k >= 8 && levels.len() < 6 {
        levels.push(k);
        k /= 2;
    }
    levels.reverse();
    for k in levels {
        let mut o = opts.with_truncation(k);
        // coarse levels are reported, not rejected
        o.convergence_tol = f64::INFINITY;
        let r = solve_surface(s, o, 1)?;
        t.push(vec![k as f64, r.lambda1, r.convergence_estimate]);
    }
    Ok(t)
}

fn sweep_table(scenario: &Scenario, model: &SubmersionModel) -> Result<Table> {
    let mut t = Table::new(&[
        "u",
        "kappa",
        "tau",
        "H",
        "lambda1",
        "bound_i_ambient",
        "bound_ii_ambient",
        "bound_ii_intrinsic",
    ]);
    let Some(sweep) = scenario.outputs.sweep else {
        return Ok(t);
    };
    let samples = match scenario.surface {
        crate::scenario::SurfaceSpec::ParallelTorus { samples, .. } => samples,
        _ => crate::surface::DEFAULT_CURVE_SAMPLES,
    };
    let profile = model.profile().expect("validated as warped");
    for u in sweep.points() {
        let torus = parallel_hopf_torus_sampled(model, u, samples)?;
        let r = solve_surface(&torus, scenario.solver.options(), 1)?;
        let jet = profile.jet(u)?;
        let (a1, a2) = theorem_bounds(&torus, GradientMode::Ambient)?;
        let (_, i2) = theorem_bounds(&torus, GradientMode::IntrinsicOnSurface)?;
        t.push(vec![
            u,
            jet.kappa(),
            jet.tau(),
            torus.mean_curvature(),
            r.lambda1,
            a1,
            a2,
            i2,
        ]);
    }
    Ok(t)
}
