#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::falgebra::FTerm;

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        if let Ok(t) = FTerm::from_json(&v) {
            assert_eq!(FTerm::from_json(&t.to_json()).expect("emitted term parses"), t);
        }
    }
});
