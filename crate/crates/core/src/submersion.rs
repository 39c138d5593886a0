//! Catalog of Killing submersion models `M(kappa, tau)`.
//!
//! Every model carries `kappa` and `tau` as sampled fields over a single base
//! parameter. Homogeneous models sample constants on a nominal circle,
//! product models take an arbitrary `kappa` field with `tau = 0`, and warped
//! models sample the closed forms of a [`ThetaProfile`] over its window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{DiffBackend, Domain, ScalarField1D};
use crate::geometry::{classify_regime, Regime, DEFAULT_REGIME_TOL};
use crate::warped::ThetaProfile;

/// Samples used for the constant fields of homogeneous models.
pub const HOMOGENEOUS_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Homogeneous,
    Product,
    Warped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberLength {
    Finite(f64),
    Noncompact,
}

impl FiberLength {
    pub fn finite(self) -> Option<f64> {
        match self {
            FiberLength::Finite(l) => Some(l),
            FiberLength::Noncompact => None,
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            FiberLength::Finite(l) if !(l.is_finite() && l > 0.0) => Err(Error::NonPositive("fiber_length")),
            other => Ok(other),
        }
    }
}

impl From<f64> for FiberLength {
    fn from(l: f64) -> Self {
        FiberLength::Finite(l)
    }
}

/// Which reading of `|grad tau|` enters the bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Derivative of `tau` along the surface.
    #[default]
    IntrinsicOnSurface,
    /// Full gradient of `tau` in the ambient space.
    Ambient,
}

#[derive(Clone, Debug)]
pub struct SubmersionModel {
    pub kind: ModelKind,
    pub name: String,
    pub description: String,
    kappa: ScalarField1D,
    tau: ScalarField1D,
    fiber: FiberLength,
    profile: Option<ThetaProfile>,
}

impl SubmersionModel {
    pub(crate) fn from_parts(
        kind: ModelKind,
        name: impl Into<String>,
        kappa: ScalarField1D,
        tau: ScalarField1D,
        fiber: FiberLength,
        profile: Option<ThetaProfile>,
    ) -> Result<Self> {
        if !kappa.same_grid(&tau) {
            return Err(Error::invalid(
                "model",
                "kappa and tau fields use different grids",
            ));
        }
        Ok(Self {
            kind,
            name: name.into(),
            description: String::new(),
            kappa,
            tau,
            fiber: fiber.validate()?,
            profile,
        })
    }

    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }

    pub fn kappa_field(&self) -> &ScalarField1D {
        &self.kappa
    }

    pub fn tau_field(&self) -> &ScalarField1D {
        &self.tau
    }

    pub fn fiber_length(&self) -> FiberLength {
        self.fiber
    }

    pub fn profile(&self) -> Option<&ThetaProfile> {
        self.profile.as_ref()
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self.kappa.samples(), self.tau.samples(), DEFAULT_REGIME_TOL).unwrap_or(Regime::Mixed)
    }

    /// True when `tau` vanishes at every sample.
    pub fn is_untwisted(&self) -> bool {
        self.tau.samples().iter().all(|&t| t == 0.0)
    }
}

pub fn homogeneous_model(
    kappa: f64,
    tau: f64,
    fiber_length: impl Into<FiberLength>,
) -> Result<SubmersionModel> {
    if !(kappa.is_finite() && tau.is_finite()) {
        return Err(Error::NonFinite);
    }
    let period = 2.0 * std::f64::consts::PI;
    SubmersionModel::from_parts(
        ModelKind::Homogeneous,
        format!("homogeneous(kappa={kappa}, tau={tau})"),
        ScalarField1D::constant(HOMOGENEOUS_SAMPLES, period, kappa)?,
        ScalarField1D::constant(HOMOGENEOUS_SAMPLES, period, tau)?,
        fiber_length.into(),
        None,
    )
}

pub fn product_model(
    kappa_field: ScalarField1D,
    fiber_length: impl Into<FiberLength>,
) -> Result<SubmersionModel> {
    let tau = kappa_field.map(|_| 0.0);
    SubmersionModel::from_parts(
        ModelKind::Product,
        "product",
        kappa_field,
        tau,
        fiber_length.into(),
        None,
    )
}

/// `|grad tau|` sampled over the model's base parameter.
///
/// `Ambient` differentiates the `tau` field (spectrally on periodic grids,
/// Richardson central differences on intervals). `IntrinsicOnSurface` is the
/// derivative along the parallels `{x} x S^1`, i.e. along the level sets of
/// the base parameter, which is zero for every model in this catalog.
pub fn gradient_norm_field(model: &SubmersionModel, mode: GradientMode) -> Result<ScalarField1D> {
    let backend = match model.tau.domain() {
        Domain::Periodic { .. } => DiffBackend::Spectral,
        Domain::Interval { .. } => DiffBackend::CentralRichardson,
    };
    gradient_norm_field_with(model, mode, backend)
}

pub fn gradient_norm_field_with(
    model: &SubmersionModel,
    mode: GradientMode,
    backend: DiffBackend,
) -> Result<ScalarField1D> {
    match mode {
        GradientMode::IntrinsicOnSurface => Ok(model.tau.map(|_| 0.0)),
        GradientMode::Ambient => {
            if model.tau.is_constant(0.0) {
                return Ok(model.tau.map(|_| 0.0));
            }
            Ok(model.tau.derivative(backend)?.map(f64::abs))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn homogeneous_regimes() {
        let berger = homogeneous_model(4.0, 0.5, 2.0 * PI).unwrap();
        assert_eq!(berger.kind, ModelKind::Homogeneous);
        assert_eq!(berger.regime(), Regime::Positive);
        assert_eq!(
            homogeneous_model(0.0, 1.0, 2.0 * PI).unwrap().regime(),
            Regime::Negative
        );
        let round = homogeneous_model(4.0, 1.0, 2.0 * PI).unwrap();
        assert_eq!(round.regime(), Regime::Null);
        assert!(!round.regime().admits_theorems());
    }

    #[test]
    fn rejects_nonpositive_fiber() {
        assert!(matches!(
            homogeneous_model(1.0, 0.0, 0.0),
            Err(Error::NonPositive("fiber_length"))
        ));
        assert!(homogeneous_model(1.0, 0.0, -1.0).is_err());
        let open = homogeneous_model(0.0, 0.5, FiberLength::Noncompact).unwrap();
        assert_eq!(open.fiber_length().finite(), None);
    }

    #[test]
    fn product_models_are_untwisted() {
        let sphere = product_model(ScalarField1D::constant(64, 2.0 * PI, 1.0).unwrap(), 2.0 * PI).unwrap();
        assert!(sphere.is_untwisted());
        assert_eq!(sphere.regime(), Regime::Positive);
        let hyperbolic =
            product_model(ScalarField1D::constant(64, 2.0 * PI, -1.0).unwrap(), 2.0 * PI).unwrap();
        assert_eq!(hyperbolic.regime(), Regime::Negative);

        let wavy = ScalarField1D::from_fn_periodic(128, 2.0 * PI, |v| 1.0 + 0.3 * v.cos()).unwrap();
        let m = product_model(wavy.clone(), 2.0 * PI).unwrap();
        assert_eq!(m.kappa_field(), &wavy);
        assert!(m.tau_field().same_grid(m.kappa_field()));
    }

    #[test]
    fn constant_tau_has_zero_gradient_in_both_modes() {
        let m = homogeneous_model(4.0, 0.5, 2.0 * PI).unwrap();
        for mode in [GradientMode::Ambient, GradientMode::IntrinsicOnSurface] {
            let g = gradient_norm_field(&m, mode).unwrap();
            assert!(g.samples().iter().all(|v| v.abs() < 1e-10));
        }
    }
}
