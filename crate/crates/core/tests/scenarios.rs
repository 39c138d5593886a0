use std::path::Path;

use hopf_stability::pipeline::run_scenario;
use hopf_stability::scenario::{load_scenario, parse_scenario};
use hopf_stability::Error;

fn schema_errors(text: &str) -> Vec<String> {
    match parse_scenario(text) {
        Err(Error::Schema(p)) => p,
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn every_shipped_scenario_runs_clean() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let s = load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let out = run_scenario(&s).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(
                !out.is_anomalous(),
                "{}: {:?}",
                path.display(),
                out.report.anomalies
            );
            seen += 1;
        }
    }
    assert!(seen >= 6);
}

#[test]
fn unknown_keys_are_rejected_with_their_path() {
    let errs = schema_errors(
        r#"{"version": 1, "name": "x", "model": {"kind": "homogeneous", "kappa": 1, "tau": 0, "colour": 3},
            "surface": {"kind": "hopf_torus", "curve_length": 1}}"#,
    );
    assert_eq!(errs.len(), 1);
    assert!(errs[0].contains("colour"), "{errs:?}");
}

#[test]
fn structural_errors_carry_the_path() {
    let errs = schema_errors(
        r#"{"version": 1, "name": "x", "model": {"kind": "homogeneous", "kappa": 1, "tau": 0},
            "surface": {"kind": "hopf_torus", "curve_length": "long"}}"#,
    );
    assert!(errs[0].starts_with("surface.curve_length"), "{errs:?}");
}

#[test]
fn semantic_problems_are_all_listed() {
    let errs = schema_errors(
        r#"{"version": 2, "name": "", "model": {"kind": "homogeneous", "kappa": 1, "tau": 0.5, "fiber_length": 0},
            "surface": {"kind": "horizontal_slice", "genus": 0, "kappa": {"constant": 1}},
            "solver": {"truncation": 2, "eigenvalues": 0}}"#,
    );
    for field in [
        "version",
        "name",
        "model.fiber_length",
        "surface.base_area",
        "surface.kind",
        "solver.truncation",
        "solver.eigenvalues",
    ] {
        assert!(
            errs.iter().any(|e| e.starts_with(field)),
            "missing {field} in {errs:?}"
        );
    }
}

#[test]
fn trailing_garbage_is_rejected() {
    let text = r#"{"version": 1, "name": "x", "model": {"kind": "homogeneous", "kappa": 1, "tau": 0},
        "surface": {"kind": "hopf_torus", "curve_length": 1}} {}"#;
    assert!(matches!(parse_scenario(text), Err(Error::Schema(_))));
}

#[test]
fn noncompact_fiber_blocks_hopf_tori() {
    let s = parse_scenario(
        r#"{"version": 1, "name": "x", "model": {"kind": "homogeneous", "kappa": 1, "tau": 0, "fiber_length": "noncompact"},
            "surface": {"kind": "hopf_torus", "curve_length": 1}}"#,
    );
    let err = s.and_then(|s| run_scenario(&s).map(|_| ())).unwrap_err();
    assert!(
        matches!(err, Error::NoncompactFibers | Error::Schema(_)),
        "{err:?}"
    );
}

#[test]
fn forced_theorem_of_wrong_regime_is_an_error() {
    let s = parse_scenario(
        r#"{"version": 1, "name": "x", "model": {"kind": "homogeneous", "kappa": 4, "tau": 0.5},
            "surface": {"kind": "hopf_torus", "curve_length": 6.283185307179586}, "theorem": "minus"}"#,
    )
    .unwrap();
    assert!(matches!(run_scenario(&s), Err(Error::RegimeMismatch { .. })));
}

#[test]
fn null_regime_reports_without_bounds() {
    let s = parse_scenario(
        r#"{"version": 1, "name": "x", "model": {"kind": "homogeneous", "kappa": 1, "tau": 0.5},
            "surface": {"kind": "hopf_torus", "curve_length": 6.283185307179586, "geodesic_curvature": 0.5}}"#,
    )
    .unwrap();
    let out = run_scenario(&s).unwrap();
    assert!(out.report.bounds.theorem.is_none());
    assert!(out.report.bounds.bound_i.is_none());
    assert!((out.report.spectrum.lambda1 + 1.25).abs() < 1e-12);
}

#[test]
fn negative_minimal_torus_attains_first_bound() {
    let s =
        load_scenario(&Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/minimal_hopf_negative.json"))
            .unwrap();
    let out = run_scenario(&s).unwrap();
    let b = &out.report.bounds;
    assert_eq!(b.theorem.map(|t| format!("{t:?}")), Some("Minus".into()));
    assert!(b.equality_i.as_ref().unwrap().equal);
    assert!((out.report.spectrum.lambda1 - 1.0).abs() < 1e-12);
}

#[test]
fn residuals_are_small_for_product_torus() {
    let s =
        load_scenario(&Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/product_cosine.json")).unwrap();
    let r = run_scenario(&s).unwrap().report.residuals;
    assert!(r.lambda1_identity < 1e-6, "{r:?}");
    assert!(r.ground_state_rayleigh.unwrap().abs() < 1e-9, "{r:?}");
    assert_eq!(r.gauss_bonnet, 0.0);
    assert!(r.hopf_closed_form.is_none());
}

#[test]
fn fourier_and_fd_scenarios_agree() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let a = run_scenario(&load_scenario(&dir.join("product_cosine.json")).unwrap()).unwrap();
    let b = run_scenario(&load_scenario(&dir.join("product_cosine_fd.json")).unwrap()).unwrap();
    assert!((a.report.spectrum.lambda1 - b.report.spectrum.lambda1).abs() < 1e-7);
}

#[test]
fn nested_profile_errors_keep_the_full_path() {
    let errs = schema_errors(
        r#"{"version": 1, "name": "x",
            "model": {"kind": "warped", "profile": {"name": "arctan", "scale": "half", "shift": 0}},
            "surface": {"kind": "parallel_torus", "u": 1}}"#,
    );
    assert!(
        errs[0].starts_with("model.profile.scale: invalid type"),
        "{errs:?}"
    );
}

#[test]
fn unknown_kind_lists_the_alternatives() {
    let errs = schema_errors(
        r#"{"version": 1, "name": "x", "model": {"kind": "berger", "kappa": 1},
            "surface": {"kind": "hopf_torus", "curve_length": 1}}"#,
    );
    assert!(errs[0].starts_with("model: unknown variant `berger`"), "{errs:?}");
    assert!(errs[0].contains("homogeneous"));
}

#[test]
fn missing_kind_is_reported() {
    let errs = schema_errors(
        r#"{"version": 1, "name": "x", "model": {"kappa": 1, "tau": 0},
            "surface": {"kind": "hopf_torus", "curve_length": 1}}"#,
    );
    assert!(errs[0].starts_with("model: missing field `kind`"), "{errs:?}");
}

#[test]
fn scenarios_survive_a_serialization_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for name in [
        "warped_parallel.json",
        "product_cosine.json",
        "spheroid_slice.json",
    ] {
        let s = load_scenario(&dir.join(name)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""kind":"#), "{text}");
        assert_eq!(parse_scenario(&text).unwrap(), s, "{name}");
    }
}
