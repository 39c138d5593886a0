#![no_main]

use hopf_stability::pipeline::run_scenario;
use hopf_stability::scenario::{parse_scenario, SurfaceSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(s) = parse_scenario(text) else {
        return;
    };
    // keep single executions short
    if s.solver.truncation.is_some_and(|k| k > 512)
        || s.outputs.sweep.is_some_and(|w| w.points().len() > 16)
        || matches!(s.surface, SurfaceSpec::HopfTorus { samples, .. } | SurfaceSpec::ParallelTorus { samples, .. } if samples > 4096)
    {
        return;
    }
    if let Ok(out) = run_scenario(&s) {
        let r = &out.report;
        assert!(r.spectrum.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.spectrum.lambda1, r.spectrum.eigenvalues[0]);
        hopf_stability::report::to_canonical_json(r).expect("reports serialize");
    }
});
