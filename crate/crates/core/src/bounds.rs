//! Upper bounds on the first stability eigenvalue of a CMC surface, their
//! equality cases, and the stability consequences drawn from them.
//!
//! With `g = |grad tau|` and averages taken over the surface:
//!
//! ```text
//! positive regime (kappa > 4 tau^2)
//!   (i)  lambda_1 <= -2 H^2 - mean(2 tau^2 - g)
//!   (ii) lambda_1 <= -4 H^2 - 8 pi (genus - 1) / Area - mean(kappa - g)
//! negative regime (kappa < 4 tau^2)
//!   (i)  lambda_1 <= -2 H^2 - mean(kappa - 2 tau^2 - g)
//!   (ii) lambda_1 <= -4 H^2 - 8 pi (genus - 1) / Area - mean(2 kappa - 4 tau^2 - g)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Regime;
use crate::submersion::GradientMode;
use crate::surface::{SurfaceKind, SurfaceModel};

pub const EQUALITY_REL_TOL: f64 = 1e-6;
pub const STABILITY_TOL: f64 = 1e-8;
pub const VIOLATION_TOL: f64 = 1e-8;
/// Slack for the closing area-genus inequality.
pub const AREA_GENUS_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Plus,
    Minus,
}

impl Theorem {
    pub fn regime(self) -> Regime {
        match self {
            Theorem::Plus => Regime::Positive,
            Theorem::Minus => Regime::Negative,
        }
    }

    pub fn for_regime(regime: Regime) -> Option<Self> {
        match regime {
            Regime::Positive => Some(Theorem::Plus),
            Regime::Negative => Some(Theorem::Minus),
            Regime::Null | Regime::Mixed => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremChoice {
    #[default]
    Auto,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremPart {
    PlusI,
    PlusIi,
    MinusI,
    MinusIi,
}

impl TheoremPart {
    pub fn parts(theorem: Theorem) -> [TheoremPart; 2] {
        match theorem {
            Theorem::Plus => [TheoremPart::PlusI, TheoremPart::PlusIi],
            Theorem::Minus => [TheoremPart::MinusI, TheoremPart::MinusIi],
        }
    }

    pub fn theorem(self) -> Theorem {
        match self {
            TheoremPart::PlusI | TheoremPart::PlusIi => Theorem::Plus,
            TheoremPart::MinusI | TheoremPart::MinusIi => Theorem::Minus,
        }
    }
}

fn require(s: &SurfaceModel, required: Regime) -> Result<()> {
    let found = s.regime();
    if found != required {
        return Err(Error::RegimeMismatch { required, found });
    }
    Ok(())
}

fn genus_term(s: &SurfaceModel) -> f64 {
    8.0 * PI * (s.genus() as f64 - 1.0) / s.area()
}

pub fn bound_thm_plus_i(s: &SurfaceModel, mode: GradientMode) -> Result<f64> {
    require(s, Regime::Positive)?;
    let h2 = s.mean_curvature() * s.mean_curvature();
    let mean = s.surface_mean(mode, |_, tau, g| 2.0 * tau * tau - g)?;
    Ok(-2.0 * h2 - mean)
}

pub fn bound_thm_plus_ii(s: &SurfaceModel, mode: GradientMode) -> Result<f64> {
    require(s, Regime::Positive)?;
    let h2 = s.mean_curvature() * s.mean_curvature();
    let mean = s.surface_mean(mode, |kappa, _, g| kappa - g)?;
    Ok(-4.0 * h2 - genus_term(s) - mean)
}

pub fn bound_thm_minus_i(s: &SurfaceModel, mode: GradientMode) -> Result<f64> {
    require(s, Regime::Negative)?;
    let h2 = s.mean_curvature() * s.mean_curvature();
    let mean = s.surface_mean(mode, |kappa, tau, g| kappa - 2.0 * tau * tau - g)?;
    Ok(-2.0 * h2 - mean)
}

pub fn bound_thm_minus_ii(s: &SurfaceModel, mode: GradientMode) -> Result<f64> {
    require(s, Regime::Negative)?;
    let h2 = s.mean_curvature() * s.mean_curvature();
    let mean = s.surface_mean(mode, |kappa, tau, g| 2.0 * kappa - 4.0 * tau * tau - g)?;
    Ok(-4.0 * h2 - genus_term(s) - mean)
}

pub fn bound(s: &SurfaceModel, part: TheoremPart, mode: GradientMode) -> Result<f64> {
    match part {
        TheoremPart::PlusI => bound_thm_plus_i(s, mode),
        TheoremPart::PlusIi => bound_thm_plus_ii(s, mode),
        TheoremPart::MinusI => bound_thm_minus_i(s, mode),
        TheoremPart::MinusIi => bound_thm_minus_ii(s, mode),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StronglyStable,
    Marginal,
    Unstable,
}

impl Verdict {
    /// `lambda_1 >= 0` up to the verdict tolerance.
    pub fn is_stable(self) -> bool {
        !matches!(self, Verdict::Unstable)
    }
}

pub fn stability_verdict(lambda1: f64, tol: f64) -> Verdict {
    if lambda1 > tol {
        Verdict::StronglyStable
    } else if lambda1 >= -tol {
        Verdict::Marginal
    } else {
        Verdict::Unstable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityClass {
    NoEquality,
    Equality,
    /// Numeric equality on a surface outside the characterized family.
    UncharacterizedEquality,
    /// Characterized surface whose bound is strict numerically.
    MissedEquality,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Predicate {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityRecord {
    pub part: TheoremPart,
    pub equal: bool,
    pub class: EqualityClass,
    pub gap: f64,
    pub predicates: Vec<Predicate>,
}

impl EqualityRecord {
    pub fn characterized(&self) -> bool {
        self.predicates.iter().all(|p| p.holds)
    }
}

/// The surfaces each bound names as its equality case.
pub fn characterization(s: &SurfaceModel, part: TheoremPart) -> Vec<Predicate> {
    let hopf = s.as_hopf().is_some();
    let p = |name, holds| Predicate { name, holds };
    match part {
        TheoremPart::PlusI => vec![p("horizontal", s.is_horizontal())],
        TheoremPart::PlusIi => vec![
            p("hopf_torus", hopf),
            p("kappa_constant", hopf && s.kappa_is_constant()),
            p("tau_constant", hopf && s.tau_is_constant()),
        ],
        TheoremPart::MinusI => vec![
            p("hopf_torus", hopf),
            p("geodesic_curve", hopf && s.mean_curvature() == 0.0),
            p("tau_zero", hopf && s.tau_vanishes()),
            p("kappa_constant", hopf && s.kappa_is_constant()),
        ],
        TheoremPart::MinusIi => vec![
            p("horizontal", s.is_horizontal()),
            p("gauss_equals_base", s.gaussian_curvature_matches_base()),
        ],
    }
}

pub fn equality_tolerance(lambda1: f64) -> f64 {
    EQUALITY_REL_TOL * lambda1.abs().max(1.0)
}

pub fn equality_classify(
    s: &SurfaceModel,
    lambda1: f64,
    bound: f64,
    part: TheoremPart,
    tol: f64,
) -> EqualityRecord {
    let predicates = characterization(s, part);
    let characterized = predicates.iter().all(|p| p.holds);
    let equal = (lambda1 - bound).abs() <= tol;
    let class = match (equal, characterized) {
        (true, true) => EqualityClass::Equality,
        (true, false) => EqualityClass::UncharacterizedEquality,
        (false, true) => EqualityClass::MissedEquality,
        (false, false) => EqualityClass::NoEquality,
    };
    EqualityRecord {
        part,
        equal,
        class,
        gap: bound - lambda1,
        predicates,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Violated,
    HypothesisFailed,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub note: &'static str,
}

impl CorollaryCheck {
    fn skip(name: &'static str, status: CheckStatus) -> Self {
        Self {
            name,
            status,
            lhs: None,
            rhs: None,
            note: "",
        }
    }

    fn compare(name: &'static str, lhs: f64, rhs: f64, holds: bool) -> Self {
        Self {
            name,
            status: if holds {
                CheckStatus::Holds
            } else {
                CheckStatus::Violated
            },
            lhs: Some(lhs),
            rhs: Some(rhs),
            note: "",
        }
    }

    fn with_note(mut self, note: &'static str) -> Self {
        self.note = note;
        self
    }
}

const STRICT_NOTE: &str = "strict inequality checked on the eigenvalue side";

/// Corollaries of both theorems and the closing area-genus inequality.
pub fn corollary_checks(s: &SurfaceModel, lambda1: f64, mode: GradientMode) -> Result<Vec<CorollaryCheck>> {
    use CheckStatus::*;
    let regime = s.regime();
    let stable = stability_verdict(lambda1, STABILITY_TOL).is_stable();
    let h2 = s.mean_curvature() * s.mean_curvature();
    let area = s.area();
    let genus = s.genus() as f64;
    let tol = STABILITY_TOL;
    let eq_tol = equality_tolerance(lambda1);
    let tau_const = s.tau_is_constant() && s.surface_mean(mode, |_, _, g| g)? == 0.0;
    let mean_kappa = s.surface_mean(mode, |k, _, _| k)?;
    let mut out = Vec::new();

    let plus = regime == Regime::Positive;
    let minus = regime == Regime::Negative;
    let gate = |applies: bool, hyp: bool| match (applies, hyp) {
        (false, _) => Some(NotApplicable),
        (true, false) => Some(HypothesisFailed),
        (true, true) => None,
    };

    let name = "thm_plus_corollary_i";
    out.push(match gate(plus, stable) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => {
            let rhs = s.surface_mean(mode, |_, tau, g| 0.5 * g - tau * tau)?;
            CorollaryCheck::compare(name, h2, rhs, h2 <= rhs + tol)
        }
    });

    let name = "thm_plus_corollary_ii";
    out.push(match gate(plus, stable) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => {
            let rhs = 2.0 * PI * (1.0 - genus) / area + 0.25 * s.surface_mean(mode, |k, _, g| g - k)?;
            let tight = (lambda1 - bound_thm_plus_ii(s, mode)?).abs() <= eq_tol;
            let holds = h2 <= rhs + tol && !(rhs - h2 <= tol && tight);
            CorollaryCheck::compare(name, h2, rhs, holds).with_note(STRICT_NOTE)
        }
    });

    let name = "thm_plus_constant_tau_bounds";
    out.push(match gate(plus, tau_const) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => {
            let tau = s.tau_max_abs();
            let first = -2.0 * (h2 + tau * tau);
            let second = -4.0 * h2 - genus_term(s) - mean_kappa;
            let rhs = first.min(second);
            CorollaryCheck::compare(name, lambda1, rhs, lambda1 <= rhs + VIOLATION_TOL)
        }
    });

    let name = "thm_plus_constant_tau_stable_are_horizontal";
    out.push(match gate(plus, tau_const && stable) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => CorollaryCheck {
            name,
            status: if s.is_horizontal() { Holds } else { Violated },
            lhs: Some(lambda1),
            rhs: None,
            note: "",
        },
    });

    let name = "thm_minus_corollary_i";
    out.push(match gate(minus, stable) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => {
            let rhs = s.surface_mean(mode, |k, tau, g| tau * tau + 0.5 * g - 0.5 * k)?;
            let tight = (lambda1 - bound_thm_minus_i(s, mode)?).abs() <= eq_tol;
            let holds = h2 <= rhs + tol && !(rhs - h2 <= tol && tight);
            CorollaryCheck::compare(name, h2, rhs, holds).with_note(STRICT_NOTE)
        }
    });

    let name = "thm_minus_corollary_ii";
    out.push(match gate(minus, stable) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => {
            let rhs = 2.0 * PI * (1.0 - genus) / area
                + s.surface_mean(mode, |k, tau, g| tau * tau + 0.25 * g - 0.5 * k)?;
            CorollaryCheck::compare(name, h2, rhs, h2 <= rhs + tol)
        }
    });

    let name = "thm_minus_constant_tau_bounds";
    out.push(match gate(minus, tau_const) {
        Some(st) => CorollaryCheck::skip(name, st),
        None => {
            let tau = s.tau_max_abs();
            let first = -2.0 * (h2 - tau * tau) - mean_kappa;
            let second = -4.0 * (h2 - tau * tau) - genus_term(s) - 2.0 * mean_kappa;
            let rhs = first.min(second);
            CorollaryCheck::compare(name, lambda1, rhs, lambda1 <= rhs + VIOLATION_TOL)
        }
    });

    out.push(area_genus_consequence(s, lambda1, tau_const)?);
    Ok(out)
}

fn area_genus_consequence(s: &SurfaceModel, lambda1: f64, tau_const: bool) -> Result<CorollaryCheck> {
    let name = "area_genus_consequence";
    let tau = s.tau_max_abs();
    let kappa_ok = match s.kind() {
        SurfaceKind::Hopf(t) => t
            .kappa_on_curve
            .samples()
            .iter()
            .all(|&k| k >= 0.0 && k < 4.0 * tau * tau),
        SurfaceKind::Horizontal(_) => false,
    };
    if !(tau_const && kappa_ok) {
        return Ok(CorollaryCheck::skip(name, CheckStatus::NotApplicable));
    }
    let h = s.mean_curvature().abs();
    let verdict = stability_verdict(lambda1, STABILITY_TOL);
    if h > tau {
        return Ok(CorollaryCheck {
            name,
            status: if verdict == Verdict::StronglyStable {
                CheckStatus::Violated
            } else {
                CheckStatus::Holds
            },
            lhs: Some(lambda1),
            rhs: Some(0.0),
            note: "|H| > tau forbids strong stability",
        });
    }
    if !verdict.is_stable() {
        return Ok(CorollaryCheck::skip(name, CheckStatus::HypothesisFailed));
    }
    let lhs = s.area() * (tau * tau - s.mean_curvature() * s.mean_curvature());
    let rhs = 2.0 * PI * (s.genus() as f64 - 1.0);
    Ok(CorollaryCheck::compare(
        name,
        lhs,
        rhs,
        lhs >= rhs - AREA_GENUS_TOL,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundOptions {
    pub theorem: TheoremChoice,
    pub stability_tol: f64,
    pub violation_tol: f64,
    /// Overrides the relative default `1e-6 max(1, |lambda_1|)`.
    pub equality_tol: Option<f64>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            theorem: TheoremChoice::Auto,
            stability_tol: STABILITY_TOL,
            violation_tol: VIOLATION_TOL,
            equality_tol: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeBounds {
    pub gradient_mode: GradientMode,
    pub bound_i: f64,
    pub bound_ii: f64,
    pub equality_i: EqualityRecord,
    pub equality_ii: EqualityRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub regime: Regime,
    pub theorem: Option<Theorem>,
    pub lambda1: f64,
    pub gradient_mode: GradientMode,
    pub bound_i: Option<f64>,
    pub bound_ii: Option<f64>,
    pub equality_i: Option<EqualityRecord>,
    pub equality_ii: Option<EqualityRecord>,
    pub stability_verdict: Verdict,
    pub corollary_checks: Vec<CorollaryCheck>,
    /// The other gradient reading, when it is available and disagrees.
    pub alternate: Option<ModeBounds>,
    #[serde(skip)]
    violation_tol: f64,
}

fn other(mode: GradientMode) -> GradientMode {
    match mode {
        GradientMode::Ambient => GradientMode::IntrinsicOnSurface,
        GradientMode::IntrinsicOnSurface => GradientMode::Ambient,
    }
}

fn mode_bounds(
    s: &SurfaceModel,
    theorem: Theorem,
    lambda1: f64,
    mode: GradientMode,
    eq_tol: f64,
) -> Result<ModeBounds> {
    let [p1, p2] = TheoremPart::parts(theorem);
    let b1 = bound(s, p1, mode)?;
    let b2 = bound(s, p2, mode)?;
    Ok(ModeBounds {
        gradient_mode: mode,
        bound_i: b1,
        bound_ii: b2,
        equality_i: equality_classify(s, lambda1, b1, p1, eq_tol),
        equality_ii: equality_classify(s, lambda1, b2, p2, eq_tol),
    })
}

/// Evaluate the theorem matching the surface's regime (or the one forced by
/// `opts.theorem`). Surfaces in a Null or Mixed regime get a report without
/// bounds under `Auto`; forcing a theorem onto them is an error.
pub fn evaluate(
    s: &SurfaceModel,
    lambda1: f64,
    mode: GradientMode,
    opts: &BoundOptions,
) -> Result<BoundReport> {
    let regime = s.regime();
    let theorem = match opts.theorem {
        TheoremChoice::Auto => Theorem::for_regime(regime),
        TheoremChoice::Plus => Some(Theorem::Plus),
        TheoremChoice::Minus => Some(Theorem::Minus),
    };
    if let Some(t) = theorem {
        if t.regime() != regime {
            return Err(Error::RegimeMismatch {
                required: t.regime(),
                found: regime,
            });
        }
    }
    let eq_tol = opts.equality_tol.unwrap_or_else(|| equality_tolerance(lambda1));
    let primary = theorem
        .map(|t| mode_bounds(s, t, lambda1, mode, eq_tol))
        .transpose()?;
    let alternate = match theorem {
        Some(t) => match mode_bounds(s, t, lambda1, other(mode), eq_tol) {
            Ok(alt) => {
                let p = primary.as_ref().expect("computed above");
                (alt.bound_i != p.bound_i || alt.bound_ii != p.bound_ii).then_some(alt)
            }
            Err(Error::AmbientGradientUnavailable) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    let corollary_checks = corollary_checks(s, lambda1, mode)?;
    Ok(BoundReport {
        regime,
        theorem,
        lambda1,
        gradient_mode: mode,
        bound_i: primary.as_ref().map(|p| p.bound_i),
        bound_ii: primary.as_ref().map(|p| p.bound_ii),
        equality_i: primary.as_ref().map(|p| p.equality_i.clone()),
        equality_ii: primary.map(|p| p.equality_ii),
        stability_verdict: stability_verdict(lambda1, opts.stability_tol),
        corollary_checks,
        alternate,
        violation_tol: opts.violation_tol,
    })
}

impl BoundReport {
    /// Bounds exceeded by `lambda_1`, in either gradient mode.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |mode: GradientMode, label: &str, b: f64| {
            if self.lambda1 > b + self.violation_tol {
                out.push(format!(
                    "lambda1 = {} exceeds bound ({label}) = {} under {mode:?}",
                    self.lambda1, b
                ));
            }
        };
        if let (Some(b1), Some(b2)) = (self.bound_i, self.bound_ii) {
            check(self.gradient_mode, "i", b1);
            check(self.gradient_mode, "ii", b2);
        }
        if let Some(alt) = &self.alternate {
            check(alt.gradient_mode, "i", alt.bound_i);
            check(alt.gradient_mode, "ii", alt.bound_ii);
        }
        out
    }

    /// Every condition that makes a run anomalous: violated bounds, equality
    /// outside the characterized family, intrinsic-mode missed equality and
    /// failed corollaries. Ambient-mode missed equality is reported only.
    pub fn anomalies(&self) -> Vec<String> {
        let mut out = self.violations();
        let mut records: Vec<(GradientMode, &EqualityRecord)> = Vec::new();
        for r in [&self.equality_i, &self.equality_ii].into_iter().flatten() {
            records.push((self.gradient_mode, r));
        }
        if let Some(alt) = &self.alternate {
            records.push((alt.gradient_mode, &alt.equality_i));
            records.push((alt.gradient_mode, &alt.equality_ii));
        }
        for (mode, r) in records {
            match r.class {
                EqualityClass::UncharacterizedEquality => out.push(format!(
                    "{:?}: equality outside the characterized family under {mode:?}",
                    r.part
                )),
                EqualityClass::MissedEquality if mode == GradientMode::IntrinsicOnSurface => out.push(
                    format!("{:?}: characterized surface misses equality by {}", r.part, r.gap),
                ),
                _ => {}
            }
        }
        for c in &self.corollary_checks {
            if c.status == CheckStatus::Violated {
                out.push(format!("{} violated", c.name));
            }
        }
        out
    }
}
