#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::symfunc::DiffPoly;

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        if let Ok(p) = DiffPoly::from_json(&v) {
            assert_eq!(DiffPoly::from_json(&p.to_json()).expect("emitted polynomial parses"), p);
        }
    }
});
