#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::coefficients::CoeffTable;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(t) = CoeffTable::from_json(text) {
            let again = CoeffTable::from_json(&t.to_json()).expect("emitted table parses");
            assert_eq!(again, t);
        }
    }
});
