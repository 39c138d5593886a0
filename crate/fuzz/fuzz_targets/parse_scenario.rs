#![no_main]

use hopf_stability::scenario::parse_scenario;
use hopf_stability::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse_scenario(text) {
        Ok(s) => {
            assert!(s.problems().is_empty());
            // accepted scenarios re-encode to something that parses to the same value
            let again = serde_json::to_string(&s).expect("scenarios serialize");
            assert_eq!(parse_scenario(&again).expect("round trip"), s);
        }
        Err(Error::Schema(problems)) => assert!(!problems.is_empty()),
        Err(e) => panic!("parse_scenario returned a non-schema error: {e}"),
    }
});
