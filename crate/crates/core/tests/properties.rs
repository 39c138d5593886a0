use std::f64::consts::PI;

use hopf_stability::bounds::{evaluate, BoundOptions};
use hopf_stability::field::ScalarField1D;
use hopf_stability::report::{to_canonical_json, Table};
use hopf_stability::scenario::parse_scenario;
use hopf_stability::spectral::{
    rayleigh_quotient, solve, solve_surface, SolverOptions, SpectralDomain, SpectralProblem,
};
use hopf_stability::submersion::{homogeneous_model, GradientMode};
use hopf_stability::surface::constant_hopf_torus;
use proptest::prelude::*;

fn problem(mean: f64, a: f64, b: f64, length: f64) -> SpectralProblem {
    let w = 2.0 * PI / length;
    let q = ScalarField1D::from_fn_periodic(128, length, |s| {
        mean + a * (w * s).cos() + b * (2.0 * w * s).sin()
    })
    .unwrap();
    SpectralProblem::new(SpectralDomain::Circle { length }, q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constant_tori_never_violate_bounds(
        kappa in -5.0f64..5.0,
        tau in -1.5f64..1.5,
        h in -2.0f64..2.0,
        length in 0.5f64..10.0,
    ) {
        prop_assume!((kappa - 4.0 * tau * tau).abs() > 1e-3);
        let model = homogeneous_model(kappa, tau, 2.0 * PI).unwrap();
        let s = constant_hopf_torus(&model, length, 2.0 * h, kappa, tau).unwrap();
        let r = solve_surface(&s, SolverOptions::default(), 1).unwrap();
        prop_assert!((r.lambda1 + 4.0 * h * h + kappa).abs() < 1e-9);
        let rep = evaluate(&s, r.lambda1, GradientMode::IntrinsicOnSurface, &BoundOptions::default()).unwrap();
        prop_assert!(rep.anomalies().is_empty(), "{:?}", rep.anomalies());
    }

    #[test]
    fn eigenvalues_shift_with_the_potential(
        mean in -3.0f64..3.0, a in -0.5f64..0.5, b in -0.5f64..0.5, c in -10.0f64..10.0,
    ) {
        let p = problem(mean, a, b, 2.0 * PI);
        let shifted = SpectralProblem::new(p.domain, p.potential.map(|v| v + c)).unwrap();
        let l0 = solve(&p, 3).unwrap();
        let l1 = solve(&shifted, 3).unwrap();
        for (x, y) in l0.eigenvalues.iter().zip(&l1.eigenvalues) {
            prop_assert!((x - c - y).abs() < 1e-10, "{x} {y}");
        }
    }

    #[test]
    fn eigenvalues_are_sorted_and_ground_state_positive(
        mean in -3.0f64..3.0, a in -1.0f64..1.0, b in -1.0f64..1.0, length in 1.0f64..12.0,
    ) {
        let r = solve(&problem(mean, a, b, length), 5).unwrap();
        prop_assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(r.ground_state.samples().iter().all(|&v| v > 0.0));
        prop_assert!(r.lambda1 <= -mean + 1e-12);
    }

    #[test]
    fn rayleigh_quotient_bounds_lambda1_from_above(
        mean in -2.0f64..2.0, a in -0.5f64..0.5,
        coef in proptest::collection::vec(-1.0f64..1.0, 1..8),
    ) {
        let p = problem(mean, a, 0.0, 2.0 * PI);
        let r = solve(&p, 1).unwrap();
        let f = ScalarField1D::from_fn_periodic(128, 2.0 * PI, |s| {
            coef.iter().enumerate().map(|(k, c)| c * (k as f64 * s).cos()).sum()
        }).unwrap();
        prop_assume!(f.samples().iter().any(|&v| v.abs() > 1e-6));
        prop_assert!(rayleigh_quotient(&p, &f).unwrap() >= r.lambda1 - 1e-9);
    }

    #[test]
    fn canonical_json_round_trips_floats(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let s = to_canonical_json(&x).unwrap();
        let back: f64 = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn csv_round_trips_floats(xs in proptest::collection::vec(proptest::num::f64::NORMAL, 1..6)) {
        let mut t = Table::new(&["x"]);
        for &x in &xs {
            t.push(vec![x]);
        }
        let text = t.to_csv().unwrap();
        let back: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
        prop_assert_eq!(back, xs);
    }

    #[test]
    fn arbitrary_text_never_panics_the_parser(text in ".{0,200}") {
        let _ = parse_scenario(&text);
    }
}
