//! The doubly warped product family `M = I x S^1 x S^1` with metric
//! `dx^2 + sin^2(theta(x)) dy^2 + cos^2(theta(x)) dz^2`.
//!
//! The projection `(x, y, z) -> (x, y - z)` onto `B = I x_f S^1`,
//! `f = sin(2 theta) / 2`, has unit vertical field `d_y + d_z`, bundle
//! curvature `tau = -theta'` and base curvature
//! `kappa = 4 theta'^2 - 2 cot(2 theta) theta''`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::field::ScalarField1D;
use crate::submersion::{GradientMode, ModelKind, SubmersionModel};
use crate::surface::{HopfTorus, SurfaceModel};

/// Default sample count for the fields of a warped model.
pub const WARPED_SAMPLES: usize = 1025;
/// Parallels with `sin(2 theta(u))` below this are rejected as degenerate.
pub const DEGENERATE_PARALLEL: f64 = 1e-6;

/// In scenario files the variant is written as a `"name"` field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ThetaShape {
    /// `theta(x) = scale * atan(x) + shift`.
    Arctan {
        scale: f64,
        shift: f64,
    },
    Constant {
        value: f64,
    },
    /// Values on the uniform grid `start + i * spacing`; derivatives come
    /// from the local five-point interpolant.
    Sampled {
        start: f64,
        spacing: f64,
        values: Vec<f64>,
    },
}

/// `theta` and its first two derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaJet {
    pub theta: f64,
    pub d1: f64,
    pub d2: f64,
}

impl ThetaJet {
    pub fn tau(&self) -> f64 {
        -self.d1
    }

    pub fn cot_two_theta(&self) -> f64 {
        let two = 2.0 * self.theta;
        two.cos() / two.sin()
    }

    pub fn kappa(&self) -> f64 {
        4.0 * self.d1 * self.d1 - 2.0 * self.cot_two_theta() * self.d2
    }

    /// `kappa - 4 tau^2` in its reduced form `-2 cot(2 theta) theta''`.
    pub fn excess(&self) -> f64 {
        -2.0 * self.cot_two_theta() * self.d2
    }

    /// Warping function `f = sin(2 theta) / 2` of the base.
    pub fn warp(&self) -> f64 {
        0.5 * (2.0 * self.theta).sin()
    }

    /// `f' = theta' cos(2 theta)`.
    pub fn warp_d1(&self) -> f64 {
        self.d1 * (2.0 * self.theta).cos()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaProfile {
    pub name: String,
    pub shape: ThetaShape,
    /// Open interval `I` on which `theta` is defined.
    pub interval: (f64, f64),
    /// Compact window sampled when building the model fields.
    pub window: (f64, f64),
}

impl ThetaProfile {
    pub fn new(
        name: impl Into<String>,
        shape: ThetaShape,
        interval: (f64, f64),
        window: (f64, f64),
    ) -> Result<Self> {
        let p = Self {
            name: name.into(),
            shape,
            interval,
            window,
        };
        p.validate()?;
        Ok(p)
    }

    /// `theta(x) = atan(x) / 2` on `I = (0, inf)`.
    pub fn half_arctan() -> Self {
        Self {
            name: "half_arctan".into(),
            shape: ThetaShape::Arctan {
                scale: 0.5,
                shift: 0.0,
            },
            interval: (0.0, f64::INFINITY),
            window: (0.25, 4.25),
        }
    }

    /// `theta(x) = atan(x) / 2 + pi / 4` on `I = (0, inf)`.
    pub fn half_arctan_shifted() -> Self {
        Self {
            name: "half_arctan_shifted".into(),
            shape: ThetaShape::Arctan {
                scale: 0.5,
                shift: FRAC_PI_4,
            },
            ..Self::half_arctan()
        }
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(
            "constant",
            ThetaShape::Constant { value },
            (f64::NEG_INFINITY, f64::INFINITY),
            (0.0, 4.0),
        )
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.interval;
        let (wlo, whi) = self.window;
        if !(lo < hi) {
            return Err(Error::invalid("profile.interval", "must be a nonempty interval"));
        }
        if !(wlo.is_finite() && whi.is_finite() && wlo < whi && wlo > lo && whi < hi) {
            return Err(Error::invalid(
                "profile.window",
                "must be a finite subinterval of the open interval",
            ));
        }
        match &self.shape {
            ThetaShape::Arctan { scale, shift } if !(scale.is_finite() && shift.is_finite()) => {
                return Err(Error::NonFinite)
            }
            ThetaShape::Sampled {
                start,
                spacing,
                values,
            } => {
                if values.len() < 5 {
                    return Err(Error::TooFewSamples {
                        got: values.len(),
                        min: 5,
                    });
                }
                if !(spacing.is_finite() && *spacing > 0.0 && start.is_finite()) {
                    return Err(Error::NonPositive("profile.spacing"));
                }
                let end = start + spacing * (values.len() - 1) as f64;
                if wlo < *start || whi > end + 1e-12 * spacing {
                    return Err(Error::invalid(
                        "profile.window",
                        "extends beyond the sampled range",
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.interval.0 && x < self.interval.1
    }

    pub fn jet(&self, x: f64) -> Result<ThetaJet> {
        if !self.contains(x) {
            return Err(Error::invalid(
                "x",
                format!("{x} lies outside the profile interval"),
            ));
        }
        let jet = match &self.shape {
            ThetaShape::Arctan { scale, shift } => {
                let w = 1.0 + x * x;
                ThetaJet {
                    theta: scale * x.atan() + shift,
                    d1: scale / w,
                    d2: -2.0 * scale * x / (w * w),
                }
            }
            ThetaShape::Constant { value } => ThetaJet {
                theta: *value,
                d1: 0.0,
                d2: 0.0,
            },
            ThetaShape::Sampled {
                start,
                spacing,
                values,
            } => {
                let end = start + spacing * (values.len() - 1) as f64;
                if x < *start || x > end {
                    return Err(Error::invalid("x", "outside the sampled range"));
                }
                five_point_jet(*start, *spacing, values, x)
            }
        };
        if !(jet.theta > 0.0 && jet.theta < FRAC_PI_2) {
            return Err(Error::Hypothesis(format!(
                "theta({x}) = {} leaves (0, pi/2)",
                jet.theta
            )));
        }
        Ok(jet)
    }
}

// Value and first two derivatives of the quartic through the five nodes
// nearest to x.
fn five_point_jet(start: f64, h: f64, values: &[f64], x: f64) -> ThetaJet {
    let n = values.len();
    let centre = ((x - start) / h).round() as isize;
    let first = (centre - 2).clamp(0, n as isize - 5) as usize;
    let nodes: Vec<f64> = (0..5).map(|j| start + (first + j) as f64 * h).collect();
    let mut jet = ThetaJet {
        theta: 0.0,
        d1: 0.0,
        d2: 0.0,
    };
    for j in 0..5 {
        let denom: f64 = (0..5).filter(|&m| m != j).map(|m| nodes[j] - nodes[m]).product();
        let others: Vec<f64> = (0..5).filter(|&m| m != j).map(|m| x - nodes[m]).collect();
        let l0: f64 = others.iter().product();
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        for a in 0..4 {
            l1 += (0..4).filter(|&b| b != a).map(|b| others[b]).product::<f64>();
            for b in 0..4 {
                if b != a {
                    l2 += (0..4)
                        .filter(|&c| c != a && c != b)
                        .map(|c| others[c])
                        .product::<f64>();
                }
            }
        }
        let v = values[first + j];
        jet.theta += v * l0 / denom;
        jet.d1 += v * l1 / denom;
        jet.d2 += v * l2 / denom;
    }
    jet
}

/// Killing submersion data sampled over the profile window, with fiber
/// length `2 pi`.
pub fn submersion_from_theta(profile: &ThetaProfile) -> Result<SubmersionModel> {
    submersion_from_theta_sampled(profile, WARPED_SAMPLES)
}

pub fn submersion_from_theta_sampled(profile: &ThetaProfile, samples: usize) -> Result<SubmersionModel> {
    profile.validate()?;
    let (lo, hi) = profile.window;
    let h = (hi - lo) / (samples.max(2) - 1) as f64;
    let mut kappa = Vec::with_capacity(samples);
    let mut tau = Vec::with_capacity(samples);
    for i in 0..samples {
        let jet = profile.jet(lo + i as f64 * h)?;
        if (2.0 * jet.theta).sin() < DEGENERATE_PARALLEL {
            return Err(Error::Hypothesis("cot(2 theta) is singular".into()));
        }
        kappa.push(jet.kappa());
        tau.push(jet.tau());
    }
    SubmersionModel::from_parts(
        ModelKind::Warped,
        format!("warped({})", profile.name),
        ScalarField1D::interval(kappa, lo, hi)?,
        ScalarField1D::interval(tau, lo, hi)?,
        (2.0 * PI).into(),
        Some(profile.clone()),
    )
}

/// Central-difference estimate of the base curvature `-f''/f`, independent
/// of the closed form for `kappa`.
pub fn base_curvature_oracle(profile: &ThetaProfile, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::NonPositive("h"));
    }
    if !(profile.contains(x - 2.0 * h) && profile.contains(x + 2.0 * h)) {
        return Err(Error::invalid("x", "needs a margin of 2h inside the interval"));
    }
    let f = |t: f64| -> Result<f64> { Ok(0.5 * (2.0 * profile.jet(t)?.theta).sin()) };
    let (fm, f0, fp) = (f(x - h)?, f(x)?, f(x + h)?);
    let f2 = (fp - 2.0 * f0 + fm) / (h * h);
    Ok(-f2 / f0)
}

fn warped_profile(model: &SubmersionModel) -> Result<&ThetaProfile> {
    match (model.kind, model.profile()) {
        (ModelKind::Warped, Some(p)) => Ok(p),
        _ => Err(Error::invalid("model", "expected a warped model")),
    }
}

/// Hopf torus over the parallel `{u} x S^1` of the base.
///
/// The curve has length `2 pi f(u)` and geodesic curvature `f'(u)/f(u)`;
/// `kappa`, `tau` and the ambient `|tau'| = |theta''|` are constant on it.
pub fn parallel_hopf_torus(model: &SubmersionModel, u: f64) -> Result<SurfaceModel> {
    parallel_hopf_torus_sampled(model, u, crate::surface::DEFAULT_CURVE_SAMPLES)
}

pub fn parallel_hopf_torus_sampled(model: &SubmersionModel, u: f64, samples: usize) -> Result<SurfaceModel> {
    let profile = warped_profile(model)?;
    let jet = profile.jet(u)?;
    let f = jet.warp();
    if 2.0 * f < DEGENERATE_PARALLEL {
        return Err(Error::Hypothesis(format!("parallel at u = {u} is degenerate")));
    }
    let length = 2.0 * PI * f;
    let k_g = jet.warp_d1() / f;
    let kappa = ScalarField1D::constant(samples, length, jet.kappa())?;
    let tau = ScalarField1D::constant(samples, length, jet.tau())?;
    let ambient = ScalarField1D::constant(samples, length, jet.d2.abs())?;
    let torus = HopfTorus::new(length, model, k_g, kappa, tau)?
        .with_ambient_gradient(ambient)?
        .on_parallel(u);
    Ok(SurfaceModel::from_hopf(torus))
}

/// The positive-regime bounds for the warped family, written directly in `theta`:
///
/// ```text
/// -2 H^2 - mean(2 theta'^2 + theta'')
/// -4 H^2 - 8 pi (g - 1) / A - mean(4 theta'^2 + (1 - 2 cot(2 theta)) theta'')
/// ```
///
/// Requires `theta < pi/4` and `theta'' < 0` on the parallel.
pub fn warped_displayed_bounds(model: &SubmersionModel, torus: &SurfaceModel) -> Result<(f64, f64)> {
    let profile = warped_profile(model)?;
    let hopf = torus
        .as_hopf()
        .ok_or_else(|| Error::invalid("surface", "expected a Hopf torus"))?;
    let u = hopf
        .parallel
        .ok_or_else(|| Error::invalid("surface", "torus does not lie over a parallel"))?;
    let jet = profile.jet(u)?;
    if !(jet.theta < FRAC_PI_4 && jet.d2 < 0.0) {
        return Err(Error::Hypothesis(format!(
            "need theta < pi/4 and theta'' < 0 at u = {u}"
        )));
    }
    let h2 = torus.mean_curvature() * torus.mean_curvature();
    let n = hopf.kappa_on_curve.len();
    let genus_term = 8.0 * PI * (torus.genus() as f64 - 1.0) / torus.area();
    // integrands are constant on the parallel; average them on the torus grid
    let first = ScalarField1D::constant(n, hopf.curve_length, 2.0 * jet.d1 * jet.d1 + jet.d2)?;
    let second = ScalarField1D::constant(
        n,
        hopf.curve_length,
        // (1 - 2 cot 2theta) theta'' expanded
        4.0 * jet.d1 * jet.d1 - 2.0 * jet.cot_two_theta() * jet.d2 + jet.d2,
    )?;
    Ok((-2.0 * h2 - first.mean(), -4.0 * h2 - genus_term - second.mean()))
}

/// Model-side `(bound_i, bound_ii)` of the positive-regime theorem under a
/// chosen gradient mode, for side-by-side comparison with [`warped_displayed_bounds`].
pub fn theorem_bounds(torus: &SurfaceModel, mode: GradientMode) -> Result<(f64, f64)> {
    Ok((
        bounds::bound_thm_plus_i(torus, mode)?,
        bounds::bound_thm_plus_ii(torus, mode)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Richardson-extrapolated central differences of the closed-form theta.
    fn fd_d1(p: &ThetaProfile, x: f64, h: f64) -> f64 {
        let t = |y: f64| p.jet(y).unwrap().theta;
        let d = |h: f64| (t(x + h) - t(x - h)) / (2.0 * h);
        (4.0 * d(h) - d(2.0 * h)) / 3.0
    }

    fn fd_d2(p: &ThetaProfile, x: f64, h: f64) -> f64 {
        let t = |y: f64| p.jet(y).unwrap().theta;
        let d = |h: f64| (t(x + h) - 2.0 * t(x) + t(x - h)) / (h * h);
        (4.0 * d(h) - d(2.0 * h)) / 3.0
    }

    #[test]
    fn half_arctan_at_one() {
        let p = ThetaProfile::half_arctan();
        let jet = p.jet(1.0).unwrap();
        assert!((jet.d1 - 0.25).abs() < 1e-15);
        assert!((jet.d2 + 0.25).abs() < 1e-15);
        assert!((jet.cot_two_theta() - 1.0).abs() < 1e-15);
        assert!((jet.kappa() - 0.75).abs() < 1e-15);
        assert!((jet.tau() + 0.25).abs() < 1e-15);
        assert!((jet.kappa() - 4.0 * jet.tau() * jet.tau() - 0.5).abs() < 1e-15);
        assert!((fd_d1(&p, 1.0, 1e-3) - jet.d1).abs() < 1e-6);
        assert!((fd_d2(&p, 1.0, 1e-3) - jet.d2).abs() < 1e-6);
    }

    #[test]
    fn closed_form_derivatives_match_richardson() {
        for p in [ThetaProfile::half_arctan(), ThetaProfile::half_arctan_shifted()] {
            for i in 0..=25 {
                let x = 0.5 + 0.1 * i as f64;
                let jet = p.jet(x).unwrap();
                assert!((fd_d1(&p, x, 1e-3) - jet.d1).abs() < 1e-6, "{} d1 at {x}", p.name);
                assert!((fd_d2(&p, x, 1e-3) - jet.d2).abs() < 1e-6, "{} d2 at {x}", p.name);
            }
        }
    }

    #[test]
    fn regimes_of_the_two_profiles() {
        use crate::geometry::Regime;
        let plus = submersion_from_theta(&ThetaProfile::half_arctan()).unwrap();
        assert_eq!(plus.regime(), Regime::Positive);
        let minus = submersion_from_theta(&ThetaProfile::half_arctan_shifted()).unwrap();
        assert_eq!(minus.regime(), Regime::Negative);
        let flat = submersion_from_theta(&ThetaProfile::constant(PI / 6.0).unwrap()).unwrap();
        assert_eq!(flat.regime(), Regime::Null);
        assert!(flat.kappa_field().samples().iter().all(|&k| k == 0.0));
        assert!(flat.tau_field().samples().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn excess_identity_relative() {
        for p in [ThetaProfile::half_arctan(), ThetaProfile::half_arctan_shifted()] {
            for i in 0..50 {
                let x = 0.3 + 0.08 * i as f64;
                let jet = p.jet(x).unwrap();
                let direct = jet.kappa() - 4.0 * jet.tau() * jet.tau();
                let reduced = jet.excess();
                assert!((direct - reduced).abs() <= 1e-10 * reduced.abs(), "{x}");
            }
        }
    }

    #[test]
    fn oracle_matches_closed_form_kappa() {
        let p = ThetaProfile::half_arctan();
        let k = base_curvature_oracle(&p, 1.0, 1e-4).unwrap();
        assert!((k - 0.75).abs() < 1e-6, "{k}");
        for i in 0..=25 {
            let x = 0.5 + 0.1 * i as f64;
            let k = base_curvature_oracle(&p, x, 1e-4).unwrap();
            assert!((k - p.jet(x).unwrap().kappa()).abs() < 1e-5);
        }
        let c = ThetaProfile::constant(0.4).unwrap();
        assert_eq!(base_curvature_oracle(&c, 1.0, 1e-3).unwrap(), 0.0);
        assert!(base_curvature_oracle(&p, 1e-5, 1e-4).is_err());
    }

    #[test]
    fn warp_derivative_by_finite_differences() {
        let p = ThetaProfile::half_arctan();
        let f = |x: f64| p.jet(x).unwrap().warp();
        let h = 1e-4;
        let fd = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        let closed = p.jet(1.0).unwrap().warp_d1();
        assert!((closed - 0.25 * (PI / 4.0).cos()).abs() < 1e-15);
        assert!((fd - closed).abs() < 1e-6);
    }

    #[test]
    fn parallel_torus_at_one() {
        let model = submersion_from_theta(&ThetaProfile::half_arctan()).unwrap();
        let torus = parallel_hopf_torus(&model, 1.0).unwrap();
        let hopf = torus.as_hopf().unwrap();
        assert!((hopf.curve_length - PI * (PI / 4.0).sin()).abs() < 1e-14);
        assert!((hopf.geodesic_curvature - 0.5).abs() < 1e-15);
        assert!((torus.mean_curvature() - 0.25).abs() < 1e-15);
        assert!((torus.area() - 2.0 * PI * PI * (PI / 4.0).sin()).abs() < 1e-13);
        assert!(parallel_hopf_torus(&model, -1.0).is_err());
    }

    #[test]
    fn quarter_pi_profile_gives_minimal_tori() {
        let p = ThetaProfile::constant(FRAC_PI_4).unwrap();
        let model = submersion_from_theta(&p).unwrap();
        let torus = parallel_hopf_torus(&model, 1.0).unwrap();
        assert!(torus.mean_curvature().abs() < 1e-15);
    }

    #[test]
    fn displayed_values_at_one() {
        let model = submersion_from_theta(&ThetaProfile::half_arctan()).unwrap();
        let torus = parallel_hopf_torus(&model, 1.0).unwrap();
        let (b1, b2) = warped_displayed_bounds(&model, &torus).unwrap();
        assert!(b1.abs() < 1e-15, "{b1}");
        assert!((b2 + 0.75).abs() < 1e-15, "{b2}");

        let shifted = submersion_from_theta(&ThetaProfile::half_arctan_shifted()).unwrap();
        let t2 = parallel_hopf_torus(&shifted, 1.0).unwrap();
        assert!(matches!(
            warped_displayed_bounds(&shifted, &t2),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn displayed_bounds_match_ambient_theorem_bounds() {
        let model = submersion_from_theta(&ThetaProfile::half_arctan()).unwrap();
        let ulps = |a: f64, b: f64| (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs();
        for i in 0..=25 {
            let u = 0.5 + 0.1 * i as f64;
            let torus = parallel_hopf_torus(&model, u).unwrap();
            let (s1, s2) = warped_displayed_bounds(&model, &torus).unwrap();
            let (t1, t2) = theorem_bounds(&torus, GradientMode::Ambient).unwrap();
            assert!(ulps(s1, t1) <= 4 && ulps(s2, t2) <= 4, "u = {u}");
        }
    }

    #[test]
    fn sampled_profile_reproduces_closed_form() {
        let exact = ThetaProfile::half_arctan();
        let h = 1e-3;
        let values: Vec<f64> = (0..4001).map(|i| (0.1 + i as f64 * h).atan() * 0.5).collect();
        let p = ThetaProfile::new(
            "sampled",
            ThetaShape::Sampled {
                start: 0.1,
                spacing: h,
                values,
            },
            (0.0, f64::INFINITY),
            (0.2, 4.0),
        )
        .unwrap();
        for x in [0.5, 1.0, 1.2345, 3.0] {
            let a = p.jet(x).unwrap();
            let b = exact.jet(x).unwrap();
            assert!((a.theta - b.theta).abs() < 1e-12);
            assert!((a.d1 - b.d1).abs() < 1e-9);
            assert!((a.d2 - b.d2).abs() < 1e-6);
        }
    }
}
