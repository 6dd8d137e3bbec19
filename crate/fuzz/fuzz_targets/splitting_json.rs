#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::splitting::Splitting;

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        if let Ok(s) = Splitting::from_json(&v) {
            let again = Splitting::from_json(&s.to_json()).expect("emitted splitting parses");
            assert_eq!(again, s);
        }
    }
});
