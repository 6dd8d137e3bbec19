#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::falgebra::parse_ang_spec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(a) = parse_ang_spec(text) {
            assert!(a.height() <= 12);
            let _ = a.commutator(&a);
        }
    }
});
