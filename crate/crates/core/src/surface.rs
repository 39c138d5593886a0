//! Hopf tori `pi^{-1}(gamma)` and horizontal slices, with the derived
//! quantities the stability operator needs.
//!
//! A Hopf torus is modelled by its intrinsic flat metric, the rectangle
//! `curve_length x fiber_length` (no holonomy shear), with `kappa`, `tau`
//! and `|grad tau|` given as fields over the arclength of `gamma`.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{DiffBackend, ScalarField1D};
use crate::geometry::{classify_regime, ricci_normal, CurvatureData, Regime, DEFAULT_REGIME_TOL};
use crate::submersion::{GradientMode, ModelKind, SubmersionModel};

pub const DEFAULT_CURVE_SAMPLES: usize = 256;

/// Relative tolerance of the Gauss-Bonnet test for constant-curvature slices.
pub const GAUSS_BONNET_CONSTANT_TOL: f64 = 1e-9;
/// Relative tolerance of the Gauss-Bonnet test for quadrature bases.
pub const GAUSS_BONNET_SAMPLED_TOL: f64 = 1e-6;

/// Spread below which a sampled field is treated as constant on a surface.
pub const CONSTANCY_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct HopfTorus {
    pub curve_length: f64,
    pub fiber_length: f64,
    pub geodesic_curvature: f64,
    pub kappa_on_curve: ScalarField1D,
    pub tau_on_curve: ScalarField1D,
    /// `|d tau / ds|` along the curve.
    pub grad_tau_intrinsic: ScalarField1D,
    pub grad_tau_ambient: Option<ScalarField1D>,
    /// Base parameter of the parallel this torus lies over, if any.
    pub parallel: Option<f64>,
}

impl HopfTorus {
    pub fn new(
        curve_length: f64,
        model: &SubmersionModel,
        geodesic_curvature: f64,
        kappa_on_curve: ScalarField1D,
        tau_on_curve: ScalarField1D,
    ) -> Result<Self> {
        if !(curve_length.is_finite() && curve_length > 0.0) {
            return Err(Error::NonPositive("curve_length"));
        }
        if !geodesic_curvature.is_finite() {
            return Err(Error::NonFinite);
        }
        let fiber_length = model.fiber_length().finite().ok_or(Error::NoncompactFibers)?;
        for f in [&kappa_on_curve, &tau_on_curve] {
            let period = f
                .period()
                .ok_or_else(|| Error::invalid("curve field", "must be periodic"))?;
            if (period - curve_length).abs() > 1e-12 * curve_length {
                return Err(Error::PeriodMismatch {
                    expected: curve_length,
                    got: period,
                });
            }
        }
        if kappa_on_curve.len() != tau_on_curve.len() {
            return Err(Error::LengthMismatch {
                left: "kappa_on_curve",
                left_len: kappa_on_curve.len(),
                right: "tau_on_curve",
                right_len: tau_on_curve.len(),
            });
        }
        let grad_tau_intrinsic = if tau_on_curve.is_constant(0.0) {
            tau_on_curve.map(|_| 0.0)
        } else {
            tau_on_curve.derivative(DiffBackend::Spectral)?.map(f64::abs)
        };
        // tau is constant over the whole space for these kinds
        let grad_tau_ambient = match model.kind {
            ModelKind::Homogeneous | ModelKind::Product => Some(tau_on_curve.map(|_| 0.0)),
            ModelKind::Warped => None,
        };
        Ok(Self {
            curve_length,
            fiber_length,
            geodesic_curvature,
            kappa_on_curve,
            tau_on_curve,
            grad_tau_intrinsic,
            grad_tau_ambient,
            parallel: None,
        })
    }

    pub fn with_ambient_gradient(mut self, field: ScalarField1D) -> Result<Self> {
        if !field.same_grid(&self.tau_on_curve) {
            return Err(Error::invalid(
                "grad_tau_ambient",
                "grid differs from the curve grid",
            ));
        }
        self.grad_tau_ambient = Some(field);
        Ok(self)
    }

    pub(crate) fn on_parallel(mut self, u: f64) -> Self {
        self.parallel = Some(u);
        self
    }

    pub fn mean_curvature(&self) -> f64 {
        0.5 * self.geodesic_curvature
    }

    pub fn area(&self) -> f64 {
        self.curve_length * self.fiber_length
    }

    pub fn grad_tau(&self, mode: GradientMode) -> Result<&ScalarField1D> {
        match mode {
            GradientMode::IntrinsicOnSurface => Ok(&self.grad_tau_intrinsic),
            GradientMode::Ambient => self
                .grad_tau_ambient
                .as_ref()
                .ok_or(Error::AmbientGradientUnavailable),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaDescriptor {
    Constant(f64),
    /// Curvature at quadrature nodes of the base, with area weights.
    Sampled {
        kappa: Vec<f64>,
        weights: Vec<f64>,
    },
}

impl KappaDescriptor {
    /// Curvature of a spheroid `(a sin p cos v, a sin p sin v, c cos p)`
    /// at Gauss-Legendre nodes in the polar angle. Returns the descriptor and
    /// the quadrature area.
    pub fn spheroid(a: f64, c: f64, points: usize) -> Result<(Self, f64)> {
        if !(a > 0.0 && c > 0.0) {
            return Err(Error::NonPositive("spheroid semi-axis"));
        }
        let rule = GaussLegendre::new(points)
            .map_err(|_| Error::invalid("points", "need at least 2 quadrature points"))?;
        let (mut kappa, mut weights) = (Vec::new(), Vec::new());
        for &(node, weight) in rule.as_node_weight_pairs() {
            let p = 0.5 * PI * (node + 1.0);
            let (s, co) = p.sin_cos();
            let e = a * a * co * co + c * c * s * s;
            kappa.push(c * c / (e * e));
            weights.push(2.0 * PI * a * s * e.sqrt() * weight * 0.5 * PI);
        }
        let area = weights.iter().sum();
        Ok((KappaDescriptor::Sampled { kappa, weights }, area))
    }

    fn integral(&self, area: f64) -> f64 {
        match self {
            KappaDescriptor::Constant(k) => k * area,
            KappaDescriptor::Sampled { kappa, weights } => {
                kappa.iter().zip(weights).map(|(k, w)| k * w).sum()
            }
        }
    }

    fn samples(&self) -> Vec<f64> {
        match self {
            KappaDescriptor::Constant(k) => vec![*k],
            KappaDescriptor::Sampled { kappa, .. } => kappa.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HorizontalSlice {
    pub base_area: f64,
    pub genus: u32,
    pub kappa: KappaDescriptor,
}

impl HorizontalSlice {
    pub fn euler_characteristic(&self) -> f64 {
        2.0 - 2.0 * self.genus as f64
    }

    /// Area-weighted mean of `f(kappa)` over the slice.
    pub fn mean_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        match &self.kappa {
            KappaDescriptor::Constant(k) => f(*k),
            KappaDescriptor::Sampled { kappa, weights } => {
                let total: f64 = weights.iter().sum();
                kappa.iter().zip(weights).map(|(&k, w)| f(k) * w).sum::<f64>() / total
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum SurfaceKind {
    Hopf(HopfTorus),
    Horizontal(HorizontalSlice),
}

/// Either a constant or a field over the curve of a Hopf torus.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceField {
    Constant(f64),
    Sampled(ScalarField1D),
}

impl SurfaceField {
    pub fn mean(&self) -> f64 {
        match self {
            SurfaceField::Constant(c) => *c,
            SurfaceField::Sampled(f) => f.mean(),
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            SurfaceField::Constant(c) => *c,
            SurfaceField::Sampled(f) => f.min(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceModel {
    kind: SurfaceKind,
    area: f64,
    genus: u32,
    mean_curvature: f64,
}

impl SurfaceModel {
    pub fn from_hopf(torus: HopfTorus) -> Self {
        Self {
            area: torus.area(),
            genus: 1,
            mean_curvature: torus.mean_curvature(),
            kind: SurfaceKind::Hopf(torus),
        }
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn as_hopf(&self) -> Option<&HopfTorus> {
        match &self.kind {
            SurfaceKind::Hopf(t) => Some(t),
            SurfaceKind::Horizontal(_) => None,
        }
    }

    pub fn as_slice(&self) -> Option<&HorizontalSlice> {
        match &self.kind {
            SurfaceKind::Horizontal(s) => Some(s),
            SurfaceKind::Hopf(_) => None,
        }
    }

    pub fn is_horizontal(&self) -> bool {
        matches!(self.kind, SurfaceKind::Horizontal(_))
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn mean_curvature(&self) -> f64 {
        self.mean_curvature
    }

    /// Sign of `kappa - 4 tau^2` over the surface's own samples.
    pub fn regime(&self) -> Regime {
        let (kappa, tau) = match &self.kind {
            SurfaceKind::Hopf(t) => (
                t.kappa_on_curve.samples().to_vec(),
                t.tau_on_curve.samples().to_vec(),
            ),
            SurfaceKind::Horizontal(s) => {
                let k = s.kappa.samples();
                let zeros = vec![0.0; k.len()];
                (k, zeros)
            }
        };
        classify_regime(&kappa, &tau, DEFAULT_REGIME_TOL).unwrap_or(Regime::Mixed)
    }

    /// Surface average of `f(kappa, tau, |grad tau|)`.
    pub fn surface_mean(&self, mode: GradientMode, f: impl Fn(f64, f64, f64) -> f64) -> Result<f64> {
        match &self.kind {
            SurfaceKind::Hopf(t) => {
                let g = t.grad_tau(mode)?;
                let values: Vec<f64> = t
                    .kappa_on_curve
                    .samples()
                    .iter()
                    .zip(t.tau_on_curve.samples())
                    .zip(g.samples())
                    .map(|((&k, &tau), &gr)| f(k, tau, gr))
                    .collect();
                Ok(ScalarField1D::periodic(values, t.curve_length)?.mean())
            }
            // tau vanishes on a slice and, inside a product, everywhere
            SurfaceKind::Horizontal(s) => Ok(s.mean_of(|k| f(k, 0.0, 0.0))),
        }
    }

    pub fn kappa_is_constant(&self) -> bool {
        match &self.kind {
            SurfaceKind::Hopf(t) => t.kappa_on_curve.is_constant(CONSTANCY_TOL),
            SurfaceKind::Horizontal(s) => match &s.kappa {
                KappaDescriptor::Constant(_) => true,
                KappaDescriptor::Sampled { kappa, .. } => {
                    let lo = kappa.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = kappa.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    hi - lo <= CONSTANCY_TOL * hi.abs().max(1.0)
                }
            },
        }
    }

    pub fn tau_is_constant(&self) -> bool {
        match &self.kind {
            SurfaceKind::Hopf(t) => t.tau_on_curve.is_constant(CONSTANCY_TOL),
            SurfaceKind::Horizontal(_) => true,
        }
    }

    pub fn tau_vanishes(&self) -> bool {
        match &self.kind {
            SurfaceKind::Hopf(t) => t.tau_on_curve.samples().iter().all(|v| v.abs() <= CONSTANCY_TOL),
            SurfaceKind::Horizontal(_) => true,
        }
    }

    /// Intrinsic Gaussian curvature equals the base curvature (slices only).
    pub fn gaussian_curvature_matches_base(&self) -> bool {
        self.is_horizontal()
    }

    pub fn tau_max_abs(&self) -> f64 {
        match &self.kind {
            SurfaceKind::Hopf(t) => t.tau_on_curve.samples().iter().fold(0.0, |m, v| m.max(v.abs())),
            SurfaceKind::Horizontal(_) => 0.0,
        }
    }
}

pub fn hopf_torus(
    model: &SubmersionModel,
    curve_length: f64,
    k_g: f64,
    kappa_on_curve: ScalarField1D,
    tau_on_curve: ScalarField1D,
) -> Result<SurfaceModel> {
    Ok(SurfaceModel::from_hopf(HopfTorus::new(
        curve_length,
        model,
        k_g,
        kappa_on_curve,
        tau_on_curve,
    )?))
}

/// Hopf torus with constant `kappa`, `tau` on a curve of given length.
pub fn constant_hopf_torus(
    model: &SubmersionModel,
    curve_length: f64,
    k_g: f64,
    kappa: f64,
    tau: f64,
) -> Result<SurfaceModel> {
    let n = DEFAULT_CURVE_SAMPLES;
    hopf_torus(
        model,
        curve_length,
        k_g,
        ScalarField1D::constant(n, curve_length, kappa)?,
        ScalarField1D::constant(n, curve_length, tau)?,
    )
}

pub fn horizontal_slice(
    model: &SubmersionModel,
    base_area: f64,
    genus: u32,
    kappa: KappaDescriptor,
) -> Result<SurfaceModel> {
    if !(base_area.is_finite() && base_area > 0.0) {
        return Err(Error::NonPositive("base_area"));
    }
    if !model.is_untwisted() {
        return Err(Error::TwistedSlice);
    }
    let slice = HorizontalSlice {
        base_area,
        genus,
        kappa,
    };
    let expected = 2.0 * PI * slice.euler_characteristic();
    let scale = expected.abs().max(1.0);
    match &slice.kappa {
        KappaDescriptor::Constant(k) => {
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
            let field = model.kappa_field();
            if field.is_constant(0.0) && field.samples()[0] != *k {
                return Err(Error::invalid(
                    "kappa",
                    format!(
                        "slice curvature {k} differs from the model's {}",
                        field.samples()[0]
                    ),
                ));
            }
            let integral = k * base_area;
            if (integral - expected).abs() > GAUSS_BONNET_CONSTANT_TOL * scale {
                return Err(Error::GaussBonnet { integral, expected });
            }
        }
        KappaDescriptor::Sampled { kappa, weights } => {
            if kappa.is_empty() {
                return Err(Error::Empty { what: "kappa" });
            }
            if kappa.len() != weights.len() {
                return Err(Error::LengthMismatch {
                    left: "kappa",
                    left_len: kappa.len(),
                    right: "weights",
                    right_len: weights.len(),
                });
            }
            if kappa.iter().chain(weights).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            if weights.iter().any(|&w| w < 0.0) {
                return Err(Error::invalid("weights", "must be nonnegative"));
            }
            let total: f64 = weights.iter().sum();
            if (total - base_area).abs() > 1e-9 * base_area {
                return Err(Error::invalid(
                    "weights",
                    format!("sum to {total}, base area is {base_area}"),
                ));
            }
            let integral = slice.kappa.integral(base_area);
            if (integral - expected).abs() > GAUSS_BONNET_SAMPLED_TOL * scale {
                return Err(Error::GaussBonnet { integral, expected });
            }
        }
    }
    Ok(SurfaceModel {
        kind: SurfaceKind::Horizontal(slice),
        area: base_area,
        genus,
        mean_curvature: 0.0,
    })
}

/// Jacobi potential `q = |A|^2 + Ric(N, N)`.
///
/// On a Hopf torus (`nu = 0`) this is `4 H^2 + 2 tau^2 + kappa - 2 tau^2`;
/// on a slice both terms vanish.
pub fn potential_field(s: &SurfaceModel) -> Result<SurfaceField> {
    match s.kind() {
        SurfaceKind::Horizontal(_) => Ok(SurfaceField::Constant(0.0)),
        SurfaceKind::Hopf(t) => {
            let h = t.mean_curvature();
            let field = t.kappa_on_curve.zip_map(&t.tau_on_curve, |kappa, tau| {
                let a2 = 4.0 * h * h + 2.0 * tau * tau;
                let ric = ricci_normal(&CurvatureData {
                    kappa,
                    tau,
                    nu: 0.0,
                    x_tau: 0.0,
                })
                .expect("nu = 0 is always valid");
                a2 + ric
            })?;
            Ok(SurfaceField::Sampled(field))
        }
    }
}

/// `|integral K dA - 2 pi chi|`.
pub fn gauss_bonnet_check(s: &SurfaceModel) -> f64 {
    match s.kind() {
        // flat with chi = 0
        SurfaceKind::Hopf(_) => 0.0,
        SurfaceKind::Horizontal(slice) => {
            (slice.kappa.integral(slice.base_area) - 2.0 * PI * slice.euler_characteristic()).abs()
        }
    }
}

/// Squared norm of the traceless second fundamental form, `|A|^2 - 2 H^2`.
pub fn umbilicity_defect(s: &SurfaceModel) -> SurfaceField {
    match s.kind() {
        SurfaceKind::Horizontal(_) => SurfaceField::Constant(0.0),
        SurfaceKind::Hopf(t) => {
            let h = t.mean_curvature();
            SurfaceField::Sampled(t.tau_on_curve.map(|tau| {
                let a2 = 4.0 * h * h + 2.0 * tau * tau;
                a2 - 2.0 * h * h
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submersion::{homogeneous_model, product_model, FiberLength};

    const TWO_PI: f64 = 2.0 * PI;

    fn berger() -> SubmersionModel {
        homogeneous_model(4.0, 0.5, TWO_PI).unwrap()
    }

    fn const_product(kappa: f64) -> SubmersionModel {
        product_model(ScalarField1D::constant(64, TWO_PI, kappa).unwrap(), TWO_PI).unwrap()
    }

    fn ulps(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn minimal_hopf_torus_in_berger_model() {
        let s = constant_hopf_torus(&berger(), TWO_PI, 0.0, 4.0, 0.5).unwrap();
        assert_eq!(s.mean_curvature(), 0.0);
        assert_eq!(s.area(), TWO_PI * TWO_PI);
        assert_eq!(s.genus(), 1);
        assert_eq!(gauss_bonnet_check(&s), 0.0);
        let q = potential_field(&s).unwrap();
        assert!(matches!(&q, SurfaceField::Sampled(f) if f.samples().iter().all(|&v| v == 4.0)));
    }

    #[test]
    fn cmc_hopf_torus_norms() {
        let s = constant_hopf_torus(&berger(), TWO_PI, 1.0, 4.0, 0.5).unwrap();
        assert_eq!(s.mean_curvature(), 0.5);
        let h = s.mean_curvature();
        assert_eq!(4.0 * h * h + 2.0 * 0.25, 1.5);
        assert!(s
            .as_hopf()
            .unwrap()
            .grad_tau_intrinsic
            .samples()
            .iter()
            .all(|&g| g == 0.0));
    }

    #[test]
    fn potential_is_tau_independent_to_four_ulps() {
        for &(kappa, tau, k_g) in &[
            (4.0, 0.5, 1.0),
            (0.3, 0.7, 0.2),
            (-1.0, 1.3, 2.5),
            (7.0, 0.1, 0.0),
        ] {
            let m = homogeneous_model(kappa, tau, TWO_PI).unwrap();
            let s = constant_hopf_torus(&m, 3.0, k_g, kappa, tau).unwrap();
            let h = s.mean_curvature();
            let SurfaceField::Sampled(q) = potential_field(&s).unwrap() else {
                panic!("sampled")
            };
            assert!(q.is_constant(0.0));
            assert!(ulps(q.samples()[0], 4.0 * h * h + kappa) <= 4);
        }
    }

    #[test]
    fn product_torus_with_varying_kappa() {
        let kappa = ScalarField1D::from_fn_periodic(128, TWO_PI, |v| 1.0 + 0.3 * v.cos()).unwrap();
        let m = product_model(kappa.clone(), TWO_PI).unwrap();
        let tau = kappa.map(|_| 0.0);
        let s = hopf_torus(&m, TWO_PI, 1.0, kappa, tau).unwrap();
        let SurfaceField::Sampled(q) = potential_field(&s).unwrap() else {
            panic!()
        };
        for (x, v) in q.nodes().zip(q.samples()) {
            assert!((v - (2.0 + 0.3 * x.cos())).abs() < 1e-15);
        }
    }

    #[test]
    fn hopf_torus_errors() {
        let open = homogeneous_model(4.0, 0.5, FiberLength::Noncompact).unwrap();
        assert!(matches!(
            constant_hopf_torus(&open, TWO_PI, 0.0, 4.0, 0.5),
            Err(Error::NoncompactFibers)
        ));
        let k = ScalarField1D::constant(64, 3.0, 4.0).unwrap();
        let t = ScalarField1D::constant(64, 3.0, 0.5).unwrap();
        assert!(matches!(
            hopf_torus(&berger(), TWO_PI, 0.0, k, t),
            Err(Error::PeriodMismatch { .. })
        ));
    }

    #[test]
    fn slices_and_gauss_bonnet() {
        let sphere =
            horizontal_slice(&const_product(1.0), 4.0 * PI, 0, KappaDescriptor::Constant(1.0)).unwrap();
        assert!(sphere.is_horizontal());
        assert_eq!(gauss_bonnet_check(&sphere), 0.0);
        assert_eq!(potential_field(&sphere).unwrap(), SurfaceField::Constant(0.0));
        assert_eq!(umbilicity_defect(&sphere), SurfaceField::Constant(0.0));

        let genus2 = horizontal_slice(&const_product(-1.0), 4.0 * PI, 2, KappaDescriptor::Constant(-1.0));
        assert!(genus2.is_ok());
        let wrong = horizontal_slice(&const_product(-1.0), 2.0 * PI, 2, KappaDescriptor::Constant(-1.0));
        assert!(matches!(wrong, Err(Error::GaussBonnet { .. })));

        let flat = horizontal_slice(&const_product(0.0), 17.0, 1, KappaDescriptor::Constant(0.0)).unwrap();
        assert_eq!(flat.regime(), Regime::Null);

        assert!(matches!(
            horizontal_slice(&berger(), 4.0 * PI, 0, KappaDescriptor::Constant(4.0)),
            Err(Error::TwistedSlice)
        ));
    }

    #[test]
    fn spheroid_quadrature_satisfies_gauss_bonnet() {
        let (desc, area) = KappaDescriptor::spheroid(1.0, 0.6, 256).unwrap();
        let m = product_model(ScalarField1D::constant(64, TWO_PI, 1.0).unwrap(), TWO_PI).unwrap();
        // the model's kappa field is unrelated to sampled bases
        let s = horizontal_slice(&m, area, 0, desc).unwrap();
        assert!(gauss_bonnet_check(&s) < 1e-6);
        assert!(!s.kappa_is_constant());
    }

    #[test]
    fn umbilicity_of_hopf_tori() {
        let a = constant_hopf_torus(&berger(), TWO_PI, 0.0, 4.0, 0.5).unwrap();
        assert_eq!(umbilicity_defect(&a).mean(), 0.5);
        let b = constant_hopf_torus(&const_product(2.0), TWO_PI, 1.0, 2.0, 0.0).unwrap();
        assert_eq!(umbilicity_defect(&b).mean(), 0.5);
        let c = constant_hopf_torus(&const_product(2.0), TWO_PI, 0.0, 2.0, 0.0).unwrap();
        assert_eq!(umbilicity_defect(&c).mean(), 0.0);
    }
}
