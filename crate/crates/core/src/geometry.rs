//! Pointwise curvature algebra of a Killing submersion `M(kappa, tau)`.
//!
//! With `nu = <N, xi>` the angle function of a surface and `X(tau)` the
//! derivative of the bundle curvature along the horizontal tangent `X`:
//!
//! ```text
//! K_sigma   = tau^2 + nu^2 (kappa - 4 tau^2) - 2 nu sqrt(1 - nu^2) X(tau)
//! Ric(N, N) = kappa - 2 tau^2 - nu^2 (kappa - 4 tau^2) + 2 nu sqrt(1 - nu^2) X(tau)
//! ```
//!
//! The square root is always the nonnegative branch (`<N, Y> >= 0`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative threshold under which `kappa - 4 tau^2` counts as zero.
pub const DEFAULT_REGIME_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    pub kappa: f64,
    pub tau: f64,
    pub nu: f64,
    pub x_tau: f64,
}

impl CurvatureData {
    pub fn new(kappa: f64, tau: f64, nu: f64, x_tau: f64) -> Result<Self> {
        let d = Self {
            kappa,
            tau,
            nu,
            x_tau,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.kappa, self.tau, self.nu, self.x_tau]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        if self.nu.abs() > 1.0 {
            return Err(Error::AngleOutOfRange(self.nu));
        }
        Ok(())
    }

    /// `kappa - 4 tau^2`.
    pub fn excess(&self) -> f64 {
        self.kappa - 4.0 * self.tau * self.tau
    }

    // nu * sqrt(1 - nu^2) * X(tau), the only term odd in nu.
    fn mixed_term(&self) -> f64 {
        let nu2 = self.nu * self.nu;
        self.nu * (1.0 - nu2).max(0.0).sqrt() * self.x_tau
    }
}

/// Sectional curvature of the tangent plane of a surface with angle `nu`.
pub fn sectional_curvature(d: &CurvatureData) -> Result<f64> {
    d.validate()?;
    let nu2 = d.nu * d.nu;
    Ok(d.tau * d.tau + nu2 * d.excess() - 2.0 * d.mixed_term())
}

/// Ambient Ricci curvature in the unit normal direction.
pub fn ricci_normal(d: &CurvatureData) -> Result<f64> {
    d.validate()?;
    let nu2 = d.nu * d.nu;
    Ok(d.kappa - 2.0 * d.tau * d.tau - nu2 * d.excess() + 2.0 * d.mixed_term())
}

/// `2 K_sigma + Ric(N, N) = kappa + nu^2 (kappa - 4 tau^2) - 2 nu sqrt(1 - nu^2) X(tau)`.
pub fn combined_integrand(d: &CurvatureData) -> Result<f64> {
    d.validate()?;
    let nu2 = d.nu * d.nu;
    Ok(d.kappa + nu2 * d.excess() - 2.0 * d.mixed_term())
}

/// Sign of `kappa - 4 tau^2` over a set of samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Positive,
    Negative,
    Null,
    Mixed,
}

impl Regime {
    pub fn admits_theorems(self) -> bool {
        matches!(self, Regime::Positive | Regime::Negative)
    }
}

/// Classify the sign of `kappa_i - 4 tau_i^2`. A sample counts as zero when
/// `|kappa_i - 4 tau_i^2| <= tol * max(1, |kappa_i|)`.
pub fn classify_regime(kappa: &[f64], tau: &[f64], tol: f64) -> Result<Regime> {
    if kappa.is_empty() {
        return Err(Error::Empty { what: "kappa" });
    }
    if kappa.len() != tau.len() {
        return Err(Error::LengthMismatch {
            left: "kappa",
            left_len: kappa.len(),
            right: "tau",
            right_len: tau.len(),
        });
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("tol", "must be nonnegative"));
    }
    let (mut pos, mut neg, mut null) = (true, true, true);
    for (&k, &t) in kappa.iter().zip(tau) {
        let excess = k - 4.0 * t * t;
        let thr = tol * k.abs().max(1.0);
        pos &= excess > thr;
        neg &= excess < -thr;
        null &= excess.abs() <= thr;
    }
    Ok(if pos {
        Regime::Positive
    } else if neg {
        Regime::Negative
    } else if null {
        Regime::Null
    } else {
        Regime::Mixed
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(kappa: f64, tau: f64, nu: f64, x_tau: f64) -> CurvatureData {
        CurvatureData::new(kappa, tau, nu, x_tau).unwrap()
    }

    #[test]
    fn sectional_examples() {
        assert_eq!(sectional_curvature(&d(4.0, 0.5, 0.0, 0.0)).unwrap(), 0.25);
        assert_eq!(sectional_curvature(&d(4.0, 0.5, 1.0, 0.0)).unwrap(), 3.25);
        let v = sectional_curvature(&d(1.0, 1.0, 0.6, 0.5)).unwrap();
        assert!((v - -0.56).abs() < 1e-15);
    }

    #[test]
    fn unsimplified_sectional_formula_agrees() {
        // kappa - 3 tau^2 - <E,xi>^2 (kappa - 4 tau^2) + 2 <E,Y><E,xi> X(tau)
        // with <E,xi>^2 = 1 - nu^2 and <E,Y><E,xi> = -nu sqrt(1 - nu^2).
        let (kappa, tau, nu, x_tau) = (1.0_f64, 1.0_f64, 0.6_f64, 0.5_f64);
        let e_xi2 = 1.0 - nu * nu;
        let ey_exi = -nu * (1.0 - nu * nu).sqrt();
        let raw = kappa - 3.0 * tau * tau - e_xi2 * (kappa - 4.0 * tau * tau) + 2.0 * ey_exi * x_tau;
        let v = sectional_curvature(&d(kappa, tau, nu, x_tau)).unwrap();
        assert!((v - raw).abs() < 1e-15);
    }

    #[test]
    fn ricci_examples() {
        assert_eq!(ricci_normal(&d(4.0, 0.5, 0.0, 0.0)).unwrap(), 3.5);
        assert_eq!(ricci_normal(&d(4.0, 0.5, 1.0, 0.0)).unwrap(), 0.5);
        // 1 - 2 + 0.36 * 3 + 2 * 0.6 * 0.8 * 0.5
        let v = ricci_normal(&d(1.0, 1.0, 0.6, 0.5)).unwrap();
        assert!((v - 0.56).abs() < 1e-15);
    }

    #[test]
    fn combined_examples() {
        assert_eq!(combined_integrand(&d(4.0, 0.5, 0.0, 0.0)).unwrap(), 4.0);
        // 1 - 0.36 * 3 - 2 * 0.6 * 0.8 * 0.5
        let v = combined_integrand(&d(1.0, 1.0, 0.6, 0.5)).unwrap();
        assert!((v - -0.56).abs() < 1e-15);
        let sum = 2.0 * sectional_curvature(&d(1.0, 1.0, 0.6, 0.5)).unwrap()
            + ricci_normal(&d(1.0, 1.0, 0.6, 0.5)).unwrap();
        assert!((v - sum).abs() < 1e-15);
    }

    #[test]
    fn rejects_angle_outside_unit_interval() {
        let bad = CurvatureData {
            kappa: 1.0,
            tau: 0.0,
            nu: 1.5,
            x_tau: 0.0,
        };
        assert!(matches!(
            sectional_curvature(&bad),
            Err(Error::AngleOutOfRange(_))
        ));
        assert!(ricci_normal(&bad).is_err());
        assert!(combined_integrand(&bad).is_err());
        assert!(CurvatureData::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn regime_examples() {
        let tol = DEFAULT_REGIME_TOL;
        assert_eq!(
            classify_regime(&[4.0; 3], &[0.5; 3], tol).unwrap(),
            Regime::Positive
        );
        assert_eq!(
            classify_regime(&[0.0; 3], &[1.0; 3], tol).unwrap(),
            Regime::Negative
        );
        assert_eq!(classify_regime(&[4.0; 3], &[1.0; 3], tol).unwrap(), Regime::Null);
        assert_eq!(
            classify_regime(&[4.0, 0.0], &[0.5, 0.5], tol).unwrap(),
            Regime::Mixed
        );
        // one zero sample spoils strict positivity
        assert_eq!(
            classify_regime(&[4.0, 4.0], &[0.5, 1.0], tol).unwrap(),
            Regime::Mixed
        );
        assert!(classify_regime(&[], &[], tol).is_err());
        assert!(classify_regime(&[1.0], &[1.0, 2.0], tol).is_err());
    }

    proptest! {
        #[test]
        fn nu_reflection_symmetry(
            kappa in -10.0..10.0f64,
            tau in -3.0..3.0f64,
            nu in -1.0..=1.0f64,
            x_tau in -5.0..5.0f64,
        ) {
            let a = d(kappa, tau, nu, x_tau);
            let b = d(kappa, tau, -nu, -x_tau);
            prop_assert_eq!(sectional_curvature(&a).unwrap(), sectional_curvature(&b).unwrap());
            prop_assert_eq!(ricci_normal(&a).unwrap(), ricci_normal(&b).unwrap());
        }

        #[test]
        fn equator_collapse_is_exact(
            kappa in -10.0..10.0f64,
            tau in -3.0..3.0f64,
            x_tau in -5.0..5.0f64,
        ) {
            let a = d(kappa, tau, 0.0, x_tau);
            prop_assert_eq!(sectional_curvature(&a).unwrap(), tau * tau);
            prop_assert_eq!(ricci_normal(&a).unwrap(), kappa - 2.0 * tau * tau);
        }
    }
}
