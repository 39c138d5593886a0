//! Scenario files: JSON descriptions of a model, a surface, solver options
//! and requested outputs. See `docs/scenario-schema.md` for the format.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundOptions, TheoremChoice, STABILITY_TOL, VIOLATION_TOL};
use crate::error::{Error, Result};
use crate::field::{ScalarField1D, MIN_SAMPLES};
use crate::spectral::{Backend, SolverOptions, DEFAULT_2D_GRID, DEFAULT_2D_MODES, MIN_TRUNCATION};
use crate::submersion::{homogeneous_model, product_model, FiberLength, GradientMode, SubmersionModel};
use crate::surface::{hopf_torus, horizontal_slice, KappaDescriptor, SurfaceModel, DEFAULT_CURVE_SAMPLES};
use crate::warped::{parallel_hopf_torus_sampled, submersion_from_theta, ThetaProfile, ThetaShape};

pub const SCENARIO_VERSION: u32 = 1;
pub const DEFAULT_EIGENVALUES: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(with = "kind_tag")]
    pub model: ModelSpec,
    #[serde(with = "kind_tag")]
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub gradient_mode: GradientMode,
    #[serde(default)]
    pub theorem: TheoremChoice,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiberSpec {
    Length(f64),
    Named(NamedFiber),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedFiber {
    Noncompact,
}

impl From<FiberSpec> for FiberLength {
    fn from(f: FiberSpec) -> Self {
        match f {
            FiberSpec::Length(l) => FiberLength::Finite(l),
            FiberSpec::Named(NamedFiber::Noncompact) => FiberLength::Noncompact,
        }
    }
}

fn two_pi() -> FiberSpec {
    FiberSpec::Length(2.0 * PI)
}

/// Written in scenario files with the variant as a `"kind"` field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Homogeneous {
        kappa: f64,
        tau: f64,
        #[serde(default = "two_pi")]
        fiber_length: FiberSpec,
    },
    /// `B x R` or `B x S^1` with `kappa` given over the base parameter that
    /// the Hopf curve traverses once.
    Product {
        kappa: KappaField,
        #[serde(default = "two_pi")]
        fiber_length: FiberSpec,
    },
    Warped {
        #[serde(with = "name_tag")]
        profile: ThetaShape,
        /// Open interval of definition; `null` ends are infinite.
        #[serde(default)]
        interval: Option<(Option<f64>, Option<f64>)>,
        #[serde(default)]
        window: Option<(f64, f64)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum KappaField {
    Constant(f64),
    /// `mean + amplitude cos(2 pi s / period)`.
    Cosine {
        mean: f64,
        amplitude: f64,
    },
    Samples(Vec<f64>),
}

/// Written in scenario files with the variant as a `"kind"` field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    HopfTorus {
        curve_length: f64,
        #[serde(default)]
        geodesic_curvature: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    ParallelTorus {
        u: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    HorizontalSlice {
        #[serde(default)]
        base_area: Option<f64>,
        genus: u32,
        kappa: SliceKappa,
    },
}

fn default_samples() -> usize {
    DEFAULT_CURVE_SAMPLES
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SliceKappa {
    Constant(f64),
    Spheroid { a: f64, c: f64, points: usize },
    Sampled { kappa: Vec<f64>, weights: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub backend: Backend,
    pub truncation: Option<usize>,
    pub convergence_tol: f64,
    pub eigenvalues: usize,
    pub modes_2d: (usize, usize),
    pub grid_2d: (usize, usize),
}

impl Default for SolverSpec {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self {
            backend: o.backend,
            truncation: None,
            convergence_tol: o.convergence_tol,
            eigenvalues: DEFAULT_EIGENVALUES,
            modes_2d: DEFAULT_2D_MODES,
            grid_2d: DEFAULT_2D_GRID,
        }
    }
}

impl SolverSpec {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            backend: self.backend,
            truncation: self.truncation,
            modes_2d: self.modes_2d,
            grid_2d: self.grid_2d,
            convergence_tol: self.convergence_tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSpec {
    pub stability: f64,
    pub violation: f64,
    pub equality: Option<f64>,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            stability: STABILITY_TOL,
            violation: VIOLATION_TOL,
            equality: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    Potential,
    GroundState,
    Convergence,
    Sweep,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Vec<Series>,
    pub sweep: Option<SweepSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub u_start: f64,
    pub u_end: f64,
    pub u_step: f64,
}

impl SweepSpec {
    pub const MAX_POINTS: usize = 100_000;

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.u_end - self.u_start) / self.u_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.u_start + i as f64 * self.u_step).collect()
    }
}

// Internally tagged objects `{"kind": "x", ...}` are rewritten to the
// externally tagged `{"x": {...}}` before decoding. serde would otherwise
// buffer them and lose the path of errors inside. Nested paths travel in the
// error message as a `@path: ` prefix.
mod tagged {
    use serde::de::{DeserializeOwned, Error as _};
    use serde::ser::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::{Map, Value};

    pub(super) const MARK: char = '@';

    pub(super) fn join(head: &str, message: &str) -> String {
        match message.strip_prefix(MARK) {
            Some(rest) if head.is_empty() || head == "." => format!("{MARK}{rest}"),
            Some(rest) => format!("{MARK}{head}.{rest}"),
            None if head.is_empty() || head == "." => message.to_string(),
            None => format!("{MARK}{head}: {message}"),
        }
    }

    pub(super) fn deserialize<'de, D, T>(d: D, tag: &'static str) -> Result<T, D::Error>
    where
        D: Deserializer<'de>,
        T: DeserializeOwned,
    {
        let Value::Object(mut map) = Value::deserialize(d)? else {
            return Err(D::Error::custom("expected an object"));
        };
        let variant = match map.remove(tag) {
            Some(Value::String(s)) => s,
            Some(_) => return Err(D::Error::custom(format!("{MARK}{tag}: must be a string"))),
            None => return Err(D::Error::missing_field(tag)),
        };
        let external = Value::Object(Map::from_iter([(variant, Value::Object(map))]));
        serde_path_to_error::deserialize(external).map_err(|e| {
            let path = e.path().to_string();
            // drop the variant segment
            let inner = path.split_once('.').map_or("", |(_, rest)| rest).to_string();
            D::Error::custom(join(&inner, &e.into_inner().to_string()))
        })
    }

    pub(super) fn serialize<S, T>(value: &T, s: S, tag: &'static str) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize,
    {
        let Value::Object(outer) = serde_json::to_value(value).map_err(S::Error::custom)? else {
            return Err(S::Error::custom("tagged value must be a struct variant"));
        };
        let Some((variant, Value::Object(fields))) = outer.into_iter().next() else {
            return Err(S::Error::custom("tagged value must be a struct variant"));
        };
        let mut map = Map::new();
        map.insert(tag.to_string(), Value::String(variant));
        map.extend(fields);
        Value::Object(map).serialize(s)
    }
}

mod kind_tag {
    use serde::{de::DeserializeOwned, Deserializer, Serialize, Serializer};

    pub fn deserialize<'de, D: Deserializer<'de>, T: DeserializeOwned>(d: D) -> Result<T, D::Error> {
        super::tagged::deserialize(d, "kind")
    }

    pub fn serialize<S: Serializer, T: Serialize>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        super::tagged::serialize(v, s, "kind")
    }
}

mod name_tag {
    use serde::{de::DeserializeOwned, Deserializer, Serialize, Serializer};

    pub fn deserialize<'de, D: Deserializer<'de>, T: DeserializeOwned>(d: D) -> Result<T, D::Error> {
        super::tagged::deserialize(d, "name")
    }

    pub fn serialize<S: Serializer, T: Serialize>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        super::tagged::serialize(v, s, "name")
    }
}

/// Decode a scenario, reporting the path of the first structural error.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let joined = tagged::join(&path, &e.into_inner().to_string());
        Error::Schema(vec![joined
            .strip_prefix(tagged::MARK)
            .unwrap_or(&joined)
            .to_string()])
    })?;
    de.end().map_err(|e| Error::Schema(vec![e.to_string()]))?;
    let problems = scenario.problems();
    if !problems.is_empty() {
        return Err(Error::Schema(problems));
    }
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

struct Problems(Vec<String>);

impl Problems {
    fn check(&mut self, ok: bool, path: &str, reason: &str) {
        if !ok {
            self.0.push(format!("{path}: {reason}"));
        }
    }

    fn finite(&mut self, v: f64, path: &str) {
        self.check(v.is_finite(), path, "must be finite");
    }

    fn positive(&mut self, v: f64, path: &str) {
        self.check(v.is_finite() && v > 0.0, path, "must be positive");
    }
}

impl Scenario {
    /// `Err(Schema)` listing every problem, for scenarios edited after parsing.
    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Schema(problems))
        }
    }

    /// Every semantic problem, as `path: reason`.
    pub fn problems(&self) -> Vec<String> {
        let mut p = Problems(Vec::new());
        p.check(
            self.version == SCENARIO_VERSION,
            "version",
            &format!(
                "unsupported version {}, expected {SCENARIO_VERSION}",
                self.version
            ),
        );
        p.check(!self.name.trim().is_empty(), "name", "must not be empty");
        p.check(
            self.name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')),
            "name",
            "may only contain ASCII letters, digits, '_', '-' and '.'",
        );
        self.model_problems(&mut p);
        self.surface_problems(&mut p);
        self.solver_problems(&mut p);
        let t = &self.tolerances;
        p.check(
            t.stability >= 0.0 && t.stability.is_finite(),
            "tolerances.stability",
            "must be nonnegative",
        );
        p.check(
            t.violation >= 0.0 && t.violation.is_finite(),
            "tolerances.violation",
            "must be nonnegative",
        );
        if let Some(e) = t.equality {
            p.check(
                e >= 0.0 && e.is_finite(),
                "tolerances.equality",
                "must be nonnegative",
            );
        }
        self.output_problems(&mut p);
        p.0
    }

    fn model_problems(&self, p: &mut Problems) {
        let fiber = |p: &mut Problems, f: &FiberSpec| {
            if let FiberSpec::Length(l) = f {
                p.positive(*l, "model.fiber_length");
            }
        };
        match &self.model {
            ModelSpec::Homogeneous {
                kappa,
                tau,
                fiber_length,
            } => {
                p.finite(*kappa, "model.kappa");
                p.finite(*tau, "model.tau");
                fiber(p, fiber_length);
            }
            ModelSpec::Product { kappa, fiber_length } => {
                match kappa {
                    KappaField::Constant(k) => p.finite(*k, "model.kappa.constant"),
                    KappaField::Cosine { mean, amplitude } => {
                        p.finite(*mean, "model.kappa.cosine.mean");
                        p.finite(*amplitude, "model.kappa.cosine.amplitude");
                    }
                    KappaField::Samples(s) => {
                        p.check(
                            s.len() >= MIN_SAMPLES,
                            "model.kappa.samples",
                            &format!("needs at least {MIN_SAMPLES} values"),
                        );
                        p.check(
                            s.iter().all(|v| v.is_finite()),
                            "model.kappa.samples",
                            "must be finite",
                        );
                    }
                }
                fiber(p, fiber_length);
            }
            ModelSpec::Warped { .. } => {
                if let Err(e) = self.theta_profile() {
                    p.0.push(format!("model.profile: {e}"));
                }
            }
        }
    }

    fn surface_problems(&self, p: &mut Problems) {
        let warped = matches!(self.model, ModelSpec::Warped { .. });
        match &self.surface {
            SurfaceSpec::HopfTorus {
                curve_length,
                geodesic_curvature,
                samples,
            } => {
                p.positive(*curve_length, "surface.curve_length");
                p.finite(*geodesic_curvature, "surface.geodesic_curvature");
                p.check(
                    *samples >= MIN_SAMPLES,
                    "surface.samples",
                    &format!("must be at least {MIN_SAMPLES}"),
                );
                p.check(
                    !warped,
                    "surface.kind",
                    "warped models take parallel_torus surfaces",
                );
            }
            SurfaceSpec::ParallelTorus { u, samples } => {
                p.finite(*u, "surface.u");
                p.check(
                    *samples >= MIN_SAMPLES,
                    "surface.samples",
                    &format!("must be at least {MIN_SAMPLES}"),
                );
                p.check(warped, "surface.kind", "parallel_torus needs a warped model");
            }
            SurfaceSpec::HorizontalSlice { base_area, kappa, .. } => {
                match kappa {
                    SliceKappa::Constant(k) => {
                        p.finite(*k, "surface.kappa.constant");
                        p.check(
                            base_area.is_some(),
                            "surface.base_area",
                            "required for constant curvature",
                        );
                    }
                    SliceKappa::Spheroid { a, c, points } => {
                        p.positive(*a, "surface.kappa.spheroid.a");
                        p.positive(*c, "surface.kappa.spheroid.c");
                        p.check(
                            *points >= 2,
                            "surface.kappa.spheroid.points",
                            "must be at least 2",
                        );
                        p.check(
                            *points <= 4096,
                            "surface.kappa.spheroid.points",
                            "must be at most 4096",
                        );
                    }
                    SliceKappa::Sampled { kappa, weights } => {
                        p.check(
                            !kappa.is_empty(),
                            "surface.kappa.sampled.kappa",
                            "must not be empty",
                        );
                        p.check(
                            kappa.len() == weights.len(),
                            "surface.kappa.sampled.weights",
                            "must have one weight per curvature sample",
                        );
                        p.check(
                            base_area.is_some(),
                            "surface.base_area",
                            "required for sampled curvature",
                        );
                    }
                }
                if let Some(a) = base_area {
                    p.positive(*a, "surface.base_area");
                }
                let untwisted = match &self.model {
                    ModelSpec::Homogeneous { tau, .. } => *tau == 0.0,
                    ModelSpec::Product { .. } => true,
                    ModelSpec::Warped { .. } => false,
                };
                p.check(
                    untwisted,
                    "surface.kind",
                    "horizontal slices need a model with tau = 0",
                );
            }
        }
    }

    fn solver_problems(&self, p: &mut Problems) {
        let s = &self.solver;
        if let Some(k) = s.truncation {
            p.check(
                k >= MIN_TRUNCATION,
                "solver.truncation",
                &format!("must be at least {MIN_TRUNCATION}"),
            );
            let cap = match s.backend {
                Backend::FiniteDifference => 1 << 16,
                Backend::Fourier2d => 32,
                _ => 512,
            };
            p.check(
                k <= cap,
                "solver.truncation",
                &format!("must be at most {cap} for this backend"),
            );
        }
        p.positive(s.convergence_tol, "solver.convergence_tol");
        p.check(
            (1..=64).contains(&s.eigenvalues),
            "solver.eigenvalues",
            "must be between 1 and 64",
        );
        p.check(
            s.backend != Backend::Analytic,
            "solver.backend",
            "analytic is chosen automatically for slices",
        );
        if s.backend == Backend::Fourier2d {
            let (ks, kt) = s.modes_2d;
            let (ns, nt) = s.grid_2d;
            p.check(ks >= 1 && kt >= 1, "solver.modes_2d", "must be positive");
            p.check(ks * kt <= 16 * 8, "solver.modes_2d", "tensor basis too large");
            p.check(
                ns > 4 * ks && nt > 4 * kt,
                "solver.grid_2d",
                "too coarse for modes_2d",
            );
            p.check(
                ns <= 1024 && nt <= 1024,
                "solver.grid_2d",
                "must be at most 1024 per axis",
            );
        }
    }

    fn output_problems(&self, p: &mut Problems) {
        let warped = matches!(self.model, ModelSpec::Warped { .. });
        if let Some(sw) = &self.outputs.sweep {
            p.finite(sw.u_start, "outputs.sweep.u_start");
            p.finite(sw.u_end, "outputs.sweep.u_end");
            p.positive(sw.u_step, "outputs.sweep.u_step");
            p.check(
                sw.u_start <= sw.u_end,
                "outputs.sweep.u_end",
                "must not precede u_start",
            );
            if sw.u_step > 0.0 && sw.u_end.is_finite() && sw.u_start.is_finite() {
                let n = (sw.u_end - sw.u_start) / sw.u_step;
                p.check(
                    n < SweepSpec::MAX_POINTS as f64,
                    "outputs.sweep",
                    "too many points",
                );
            }
            p.check(warped, "outputs.sweep", "sweeps need a warped model");
        }
        p.check(
            !self.outputs.csv.contains(&Series::Sweep) || self.outputs.sweep.is_some(),
            "outputs.csv",
            "sweep series requested without outputs.sweep",
        );
    }

    fn theta_profile(&self) -> Result<ThetaProfile> {
        let ModelSpec::Warped {
            profile,
            interval,
            window,
        } = &self.model
        else {
            return Err(Error::invalid("model", "not a warped model"));
        };
        let base = match profile {
            ThetaShape::Arctan { .. } => ThetaProfile::half_arctan(),
            ThetaShape::Constant { value } => ThetaProfile::constant(*value)?,
            ThetaShape::Sampled {
                start,
                spacing,
                values,
            } => {
                let end = start + spacing * values.len().saturating_sub(1) as f64;
                ThetaProfile {
                    name: String::new(),
                    shape: profile.clone(),
                    interval: (start - 1e-9 * spacing.abs(), end + 1e-9 * spacing.abs()),
                    window: (start + 2.0 * spacing, end - 2.0 * spacing),
                }
            }
        };
        let interval = match interval {
            Some((lo, hi)) => (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY)),
            None => base.interval,
        };
        let name = match profile {
            ThetaShape::Arctan { .. } => "arctan",
            ThetaShape::Constant { .. } => "constant",
            ThetaShape::Sampled { .. } => "sampled",
        };
        ThetaProfile::new(name, profile.clone(), interval, window.unwrap_or(base.window))
    }

    /// Curve parameter period used for product-model fields.
    fn curve_period(&self) -> f64 {
        match &self.surface {
            SurfaceSpec::HopfTorus { curve_length, .. } => *curve_length,
            _ => 2.0 * PI,
        }
    }

    fn curve_samples(&self) -> usize {
        match &self.surface {
            SurfaceSpec::HopfTorus { samples, .. } | SurfaceSpec::ParallelTorus { samples, .. } => *samples,
            SurfaceSpec::HorizontalSlice { .. } => DEFAULT_CURVE_SAMPLES,
        }
    }

    pub fn build_model(&self) -> Result<SubmersionModel> {
        let model = match &self.model {
            ModelSpec::Homogeneous {
                kappa,
                tau,
                fiber_length,
            } => homogeneous_model(*kappa, *tau, FiberLength::from(*fiber_length))?,
            ModelSpec::Product { kappa, fiber_length } => {
                let period = self.curve_period();
                let field = match kappa {
                    KappaField::Constant(k) => ScalarField1D::constant(self.curve_samples(), period, *k)?,
                    KappaField::Cosine { mean, amplitude } => {
                        let w = 2.0 * PI / period;
                        ScalarField1D::from_fn_periodic(self.curve_samples(), period, |s| {
                            mean + amplitude * (w * s).cos()
                        })?
                    }
                    KappaField::Samples(s) => ScalarField1D::periodic(s.clone(), period)?,
                };
                product_model(field, FiberLength::from(*fiber_length))?
            }
            ModelSpec::Warped { .. } => submersion_from_theta(&self.theta_profile()?)?,
        };
        Ok(model.with_description(self.description.clone()))
    }

    pub fn build_surface(&self, model: &SubmersionModel) -> Result<SurfaceModel> {
        match &self.surface {
            SurfaceSpec::HopfTorus {
                curve_length,
                geodesic_curvature,
                samples,
            } => {
                let resample = |f: &ScalarField1D| -> Result<ScalarField1D> {
                    if f.is_constant(0.0) {
                        ScalarField1D::constant(*samples, *curve_length, f.samples()[0])
                    } else {
                        f.clone().with_period(*curve_length)
                    }
                };
                let kappa = resample(model.kappa_field())?;
                let tau = resample(model.tau_field())?;
                hopf_torus(model, *curve_length, *geodesic_curvature, kappa, tau)
            }
            SurfaceSpec::ParallelTorus { u, samples } => parallel_hopf_torus_sampled(model, *u, *samples),
            SurfaceSpec::HorizontalSlice {
                base_area,
                genus,
                kappa,
            } => {
                let (desc, area) = match kappa {
                    SliceKappa::Constant(k) => (KappaDescriptor::Constant(*k), base_area.unwrap_or(f64::NAN)),
                    SliceKappa::Spheroid { a, c, points } => {
                        let (d, area) = KappaDescriptor::spheroid(*a, *c, *points)?;
                        (d, base_area.unwrap_or(area))
                    }
                    SliceKappa::Sampled { kappa, weights } => (
                        KappaDescriptor::Sampled {
                            kappa: kappa.clone(),
                            weights: weights.clone(),
                        },
                        base_area.unwrap_or(f64::NAN),
                    ),
                };
                horizontal_slice(model, area, *genus, desc)
            }
        }
    }

    pub fn bound_options(&self) -> BoundOptions {
        BoundOptions {
            theorem: self.theorem,
            stability_tol: self.tolerances.stability,
            violation_tol: self.tolerances.violation,
            equality_tol: self.tolerances.equality,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BERGER: &str = r#"{
        "version": 1,
        "name": "berger_minimal",
        "model": {"kind": "homogeneous", "kappa": 4.0, "tau": 0.5, "fiber_length": 6.283185307179586},
        "surface": {"kind": "hopf_torus", "curve_length": 6.283185307179586, "geodesic_curvature": 0.0}
    }"#;

    #[test]
    fn parses_minimal_scenario_with_defaults() {
        let s = parse_scenario(BERGER).unwrap();
        assert_eq!(s.solver.backend, Backend::Fourier);
        assert_eq!(s.gradient_mode, GradientMode::IntrinsicOnSurface);
        let model = s.build_model().unwrap();
        let surface = s.build_surface(&model).unwrap();
        assert_eq!(surface.area(), 4.0 * PI * PI);
    }

    #[test]
    fn unknown_key_names_its_path() {
        let text = BERGER.replace("\"fiber_length\"", "\"fibre_length\"");
        let Err(Error::Schema(msgs)) = parse_scenario(&text) else {
            panic!("expected schema error")
        };
        assert!(msgs[0].starts_with("model"), "{msgs:?}");
        assert!(msgs[0].contains("fibre_length"), "{msgs:?}");
    }

    #[test]
    fn collects_every_semantic_problem() {
        let text = BERGER
            .replace("\"fiber_length\": 6.283185307179586", "\"fiber_length\": -1.0")
            .replace("\"curve_length\": 6.283185307179586", "\"curve_length\": 0.0")
            .replace("\"version\": 1", "\"version\": 7");
        let Err(Error::Schema(msgs)) = parse_scenario(&text) else {
            panic!("expected schema error")
        };
        assert_eq!(msgs.len(), 3, "{msgs:?}");
        assert!(msgs.iter().any(|m| m == "model.fiber_length: must be positive"));
        assert!(msgs.iter().any(|m| m == "surface.curve_length: must be positive"));
    }

    #[test]
    fn noncompact_fiber_parses() {
        let text = BERGER.replace("6.283185307179586}", "\"noncompact\"}");
        let s = parse_scenario(&text).unwrap();
        assert!(matches!(
            s.build_model().unwrap().fiber_length(),
            FiberLength::Noncompact
        ));
        assert!(matches!(
            s.build_surface(&s.build_model().unwrap()),
            Err(Error::NoncompactFibers)
        ));
    }

    #[test]
    fn surface_and_model_must_fit() {
        let text = r#"{
            "version": 1, "name": "bad",
            "model": {"kind": "homogeneous", "kappa": 4.0, "tau": 0.5},
            "surface": {"kind": "parallel_torus", "u": 1.0},
            "outputs": {"csv": ["sweep"]}
        }"#;
        let Err(Error::Schema(msgs)) = parse_scenario(text) else {
            panic!()
        };
        assert!(msgs.iter().any(|m| m.starts_with("surface.kind")));
        assert!(msgs.iter().any(|m| m.starts_with("outputs.csv")));
    }

    #[test]
    fn warped_and_slice_scenarios_build() {
        let warped = r#"{
            "version": 1, "name": "warped",
            "model": {"kind": "warped", "profile": {"name": "arctan", "scale": 0.5, "shift": 0.0}},
            "surface": {"kind": "parallel_torus", "u": 1.0},
            "gradient_mode": "ambient",
            "outputs": {"csv": ["sweep"], "sweep": {"u_start": 0.5, "u_end": 3.0, "u_step": 0.1}}
        }"#;
        let s = parse_scenario(warped).unwrap();
        let m = s.build_model().unwrap();
        let t = s.build_surface(&m).unwrap();
        assert!((t.mean_curvature() - 0.25).abs() < 1e-15);
        assert_eq!(s.outputs.sweep.unwrap().points().len(), 26);

        let spheroid = r#"{
            "version": 1, "name": "spheroid",
            "model": {"kind": "product", "kappa": {"constant": 1.0}},
            "surface": {"kind": "horizontal_slice", "genus": 0,
                        "kappa": {"spheroid": {"a": 1.0, "c": 0.6, "points": 256}}}
        }"#;
        let s = parse_scenario(spheroid).unwrap();
        let m = s.build_model().unwrap();
        assert!(s.build_surface(&m).unwrap().is_horizontal());
    }

    #[test]
    fn garbage_is_a_schema_error() {
        for text in ["", "{", "[]", "{\"version\": \"1\"}", "null"] {
            assert!(matches!(parse_scenario(text), Err(Error::Schema(_))), "{text}");
        }
    }
}
